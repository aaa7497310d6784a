#include "procgen/subdivide.hpp"

#include <cstdint>
#include <map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace procgen {
namespace {

// Loop's original valence weight.
Real loop_beta(size_t k) {
    Real n = static_cast<Real>(k);
    Real c = Real(3) / 8 + std::cos(2 * kPi / n) / 4;
    return (Real(5) / 8 - c * c) / n;
}

void subdivide_once(Mesh& m) {
    using EdgeKey = std::pair<int, int>;
    struct EdgeInfo {
        int opp[2] = {-1, -1};
        int faces = 0;
    };
    std::map<EdgeKey, EdgeInfo> edges;
    std::unordered_set<std::uint64_t> directed;
    for (const auto& f : m.face_slots()) {
        if (!f.alive) continue;
        for (int e = 0; e < 3; ++e) {
            int a = f.v[e], b = f.v[(e + 1) % 3], o = f.v[(e + 2) % 3];
            std::uint64_t dk = (std::uint64_t(std::uint32_t(a)) << 32) | std::uint32_t(b);
            if (!directed.insert(dk).second)
                throw UnsupportedInputError("smooth_subdivide: inconsistently wound faces");
            EdgeInfo& info = edges[std::minmax(a, b)];
            if (info.faces >= 2)
                throw UnsupportedInputError("smooth_subdivide: edge on more than two faces");
            info.opp[info.faces++] = o;
        }
    }

    // Everything below is computed from the old geometry before any mutation.
    struct Moved {
        VertexHandle h;
        Vec3 p;
    };
    std::vector<Moved> moved;
    for (VertexHandle h : m.vertexlist()) {
        auto ring = m.loopv(h);
        const Vec3& p = m.position(h);
        if (ring.empty()) continue;
        if (m.is_boundary(h)) {
            moved.push_back(
                {h, p * (Real(3) / 4) + (m.position(ring.front()) + m.position(ring.back())) / 8});
        } else {
            Real beta = loop_beta(ring.size());
            Vec3 sum{0, 0, 0};
            for (VertexHandle r : ring) sum += m.position(r);
            moved.push_back({h, p * (1 - beta * ring.size()) + sum * beta});
        }
    }

    struct NewEdgeVertex {
        Vec3 p;
        RGBA c;
        VertexHandle h;  // filled in after insertion
    };
    std::map<EdgeKey, NewEdgeVertex> edge_vertex;
    const auto& vslots = m.vertex_slots();
    for (const auto& [key, info] : edges) {
        const auto &sa = vslots[key.first], &sb = vslots[key.second];
        Vec3 p = info.faces == 2 ? (sa.p + sb.p) * (Real(3) / 8) +
                                       (vslots[info.opp[0]].p + vslots[info.opp[1]].p) / 8
                                 : (sa.p + sb.p) / 2;
        RGBA c{(sa.c.r + sb.c.r) / 2, (sa.c.g + sb.c.g) / 2, (sa.c.b + sb.c.b) / 2,
               (sa.c.a + sb.c.a) / 2};
        edge_vertex.emplace(key, NewEdgeVertex{p, c, {}});
    }

    struct OldFace {
        FaceHandle h;
        std::array<VertexHandle, 3> v;
        std::array<int, 3> slot;
    };
    std::vector<OldFace> faces;
    for (FaceHandle h : m.facelist()) {
        auto fv = m.face_vertices(h);
        faces.push_back({h, fv, {fv[0].idx, fv[1].idx, fv[2].idx}});
    }

    // Apply: reposition, insert edge vertices, rebuild the face set.
    for (const Moved& mv : moved) m.set_position(mv.h, mv.p);
    for (auto& [key, nev] : edge_vertex) {
        nev.h = m.add_vertex(nev.p);
        m.set_colour(nev.h, nev.c);
    }
    for (const OldFace& f : faces) m.destroy_face(f.h);
    for (const OldFace& f : faces) {
        VertexHandle e01 = edge_vertex.at(std::minmax(f.slot[0], f.slot[1])).h;
        VertexHandle e12 = edge_vertex.at(std::minmax(f.slot[1], f.slot[2])).h;
        VertexHandle e20 = edge_vertex.at(std::minmax(f.slot[2], f.slot[0])).h;
        m.add_face(f.v[0], e01, e20);
        m.add_face(f.v[1], e12, e01);
        m.add_face(f.v[2], e20, e12);
        m.add_face(e01, e12, e20);
    }
}

}  // namespace

void smooth_subdivide(Mesh& m, int levels) {
    if (levels < 1) throw std::invalid_argument("smooth_subdivide: levels must be >= 1");
    for (int l = 0; l < levels; ++l) subdivide_once(m);
}

}  // namespace procgen
