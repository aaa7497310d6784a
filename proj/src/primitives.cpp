#include "procgen/primitives.hpp"

#include <cstdint>
#include <map>
#include <utility>

namespace procgen {
namespace {

constexpr int kIcoFaces[20][3] = {
    {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
    {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
    {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
    {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

std::vector<Vec3> ico_vertices() {
    const Real t = (1 + std::sqrt(Real(5))) / 2;
    std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0},
                           {0, -1, t}, {0, 1, t},   {0, -1, -t}, {0, 1, -t},
                           {t, 0, -1}, {t, 0, 1},   {-t, 0, -1}, {-t, 0, 1}};
    for (Vec3& p : v) p = normalized(p);
    return v;
}

Mesh build(const std::vector<Vec3>& pts, const std::vector<std::array<int, 3>>& tris) {
    Mesh m;
    std::vector<VertexHandle> hs;
    hs.reserve(pts.size());
    for (const Vec3& p : pts) hs.push_back(m.add_vertex(p));
    for (const auto& t : tris) m.add_face(hs[t[0]], hs[t[1]], hs[t[2]]);
    return m;
}

}  // namespace

Mesh create_icosahedron() {
    std::vector<std::array<int, 3>> tris;
    for (const auto& f : kIcoFaces) tris.push_back({f[0], f[1], f[2]});
    return build(ico_vertices(), tris);
}

Mesh create_cube() {
    std::vector<Vec3> pts;
    for (int i = 0; i < 8; ++i)
        pts.push_back({i & 1 ? Real(1) : Real(-1), i & 2 ? Real(1) : Real(-1),
                       i & 4 ? Real(1) : Real(-1)});
    // Outward-facing triangles with the face diagonals balanced so every
    // corner ends up with valence 4 or 5.
    std::vector<std::array<int, 3>> tris = {
        {0, 2, 3}, {0, 3, 1},  // z = -1
        {5, 7, 6}, {5, 6, 4},  // z = +1
        {1, 5, 4}, {1, 4, 0},  // y = -1
        {2, 6, 7}, {2, 7, 3},  // y = +1
        {4, 6, 2}, {4, 2, 0},  // x = -1
        {3, 7, 5}, {3, 5, 1},  // x = +1
    };
    return build(pts, tris);
}

Mesh create_sphere(int level) {
    if (level < 1) throw std::invalid_argument("create_sphere: level must be >= 1");
    std::vector<Vec3> pts = ico_vertices();
    std::vector<std::array<int, 3>> tris;
    for (const auto& f : kIcoFaces) tris.push_back({f[0], f[1], f[2]});
    for (int l = 0; l < level; ++l) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            int idx = static_cast<int>(pts.size());
            pts.push_back(normalized(pts[a] + pts[b]));
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(tris.size() * 4);
        for (const auto& t : tris) {
            int a = mid(t[0], t[1]), b = mid(t[1], t[2]), c = mid(t[2], t[0]);
            next.push_back({t[0], a, c});
            next.push_back({t[1], b, a});
            next.push_back({t[2], c, b});
            next.push_back({a, b, c});
        }
        tris = std::move(next);
    }
    return build(pts, tris);
}

Mesh create_primitive(const std::string& kind, int level) {
    if (kind == "icosahedron") return create_icosahedron();
    if (kind == "cube") return create_cube();
    if (kind == "sphere") return create_sphere(level < 0 ? 2 : level);
    throw std::invalid_argument("create_primitive: unknown kind '" + kind + "'");
}

}  // namespace procgen
