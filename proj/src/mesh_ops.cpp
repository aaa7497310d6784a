#include "procgen/mesh_ops.hpp"

#include <stdexcept>
#include <utility>

namespace procgen {

Cap inset(Mesh& m, VertexHandle v, Real s) {
    if (!m.valid(v)) throw StaleHandleError("inset: stale vertex handle");
    if (!(s > 0 && s <= 1))
        throw std::invalid_argument("inset: scale must be in (0, 1]");
    if (m.is_boundary(v))
        throw UnsupportedInputError("inset: boundary vertex");

    std::vector<VertexHandle> ring = m.loopv(v);
    std::vector<FaceHandle> star = m.face_star(v);
    const int k = static_cast<int>(ring.size());
    if (k < 3) throw UnsupportedInputError("inset: vertex valence below 3");

    // New loop: one duplicate per ring vertex, attributes copied over.
    std::vector<VertexHandle> loop(k);
    for (int i = 0; i < k; ++i) {
        loop[i] = m.add_vertex(m.position(ring[i]));
        m.set_colour(loop[i], m.colour(ring[i]));
        m.set_normal(loop[i], m.normal(ring[i]));
    }

    // Swap the star over to the new loop; star[i] was (v, ring[i+1], ring[i])
    // in winding order.
    for (FaceHandle f : star) m.destroy_face(f);
    Cap cap;
    cap.m = &m;
    cap.fan.reserve(k);
    for (int i = 0; i < k; ++i) {
        FaceHandle f = m.add_face(v, loop[(i + 1) % k], loop[i]);
        cap.fan.push_back(Pos{v, 0, f});
    }

    // Side strip between the old and new loops, 2 triangles per ring edge.
    for (int i = 0; i < k; ++i) {
        int j = (i + 1) % k;
        m.add_face(ring[j], ring[i], loop[i]);
        m.add_face(ring[j], loop[i], loop[j]);
    }

    Vec3 centre{0, 0, 0};
    for (VertexHandle w : loop) centre = centre + m.position(w);
    centre = centre * (Real(1) / k);
    if (s != 1) {
        for (VertexHandle w : loop)
            m.set_position(w, centre + (m.position(w) - centre) * s);
    }
    return cap;
}

Cap extrude(Mesh& m, VertexHandle v, const Vec3& d, Real mag) {
    Vec3 dir = normalized(d);
    Cap cap = inset(m, v, 1);
    Vec3 shift = dir * mag;
    m.set_position(v, m.position(v) + shift);
    for (VertexHandle w : capov(cap))
        m.set_position(w, m.position(w) + shift);
    return cap;
}

std::vector<VertexHandle> capov(const Cap& cap) {
    std::vector<VertexHandle> out;
    out.reserve(cap.fan.size());
    // Each fan pos sits on the edge leading to the next outer vertex, so one
    // V-flip per face covers the ring exactly once.
    for (const Pos& p : cap.fan) out.push_back(pos_flip(*cap.m, p, FlipAxis::V).v);
    return out;
}

void flattenvl(Mesh& m, const std::vector<VertexHandle>& vl, const Vec3& p,
               const Vec3& n) {
    Vec3 nn = normalized(n);
    for (VertexHandle v : vl) {
        Vec3 q = m.position(v);
        m.set_position(v, q - nn * dot(q - p, nn));
    }
}

}  // namespace procgen
