#include "procgen/iso.hpp"

#include <cstdint>
#include <unordered_map>

#include "procgen/mc_tables.hpp"
#include "procgen/parallel.hpp"

namespace procgen {
namespace {

constexpr int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                               {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
constexpr int kEdge[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
                              {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};

Mesh iso_impl(int r, const ScalarField& f, bool par) {
    if (r < 2) throw std::invalid_argument("iso: resolution must be >= 2");
    const std::int64_t n = r;
    std::vector<Real> grid(n * n * n);
    auto coord = [r](int i) { return Real(-1) + Real(2) * i / (r - 1); };
#pragma omp parallel for schedule(static) if (par)
    for (int z = 0; z < r; ++z) {
        Real zc = coord(z);
        for (int y = 0; y < r; ++y) {
            Real yc = coord(y);
            for (int x = 0; x < r; ++x) grid[(std::int64_t(z) * r + y) * r + x] = f(coord(x), yc, zc);
        }
    }
    auto at = [&](int x, int y, int z) { return grid[(std::int64_t(z) * r + y) * r + x]; };
    auto point_id = [&](int x, int y, int z) { return (std::int64_t(z) * r + y) * r + x; };

    Mesh m;
    std::unordered_map<std::int64_t, VertexHandle> welded;
    std::array<VertexHandle, 12> ev;
    for (int z = 0; z + 1 < r; ++z)
        for (int y = 0; y + 1 < r; ++y)
            for (int x = 0; x + 1 < r; ++x) {
                Real v[8];
                for (int c = 0; c < 8; ++c)
                    v[c] = at(x + kCorner[c][0], y + kCorner[c][1], z + kCorner[c][2]);
                int ci = 0;
                for (int c = 0; c < 8; ++c)
                    if (v[c] < 0) ci |= 1 << c;
                int edges = kMcEdgeTable[ci];
                if (edges == 0) continue;
                for (int e = 0; e < 12; ++e) {
                    if (!(edges & (1 << e))) continue;
                    int a = kEdge[e][0], b = kEdge[e][1];
                    int ax[3] = {x + kCorner[a][0], y + kCorner[a][1], z + kCorner[a][2]};
                    int bx[3] = {x + kCorner[b][0], y + kCorner[b][1], z + kCorner[b][2]};
                    int axis = ax[0] != bx[0] ? 0 : (ax[1] != bx[1] ? 1 : 2);
                    // Canonical orientation: base is the lower lattice corner,
                    // so every cell sharing this edge computes the same key
                    // and the same interpolated position.
                    const int* base = ax;
                    const int* othr = bx;
                    Real vb = v[a], vo = v[b];
                    if (ax[axis] > bx[axis]) {
                        std::swap(base, othr);
                        std::swap(vb, vo);
                    }
                    std::int64_t key = point_id(base[0], base[1], base[2]) * 3 + axis;
                    auto it = welded.find(key);
                    if (it != welded.end()) {
                        ev[e] = it->second;
                        continue;
                    }
                    Real t = (0 - vb) / (vo - vb);
                    Vec3 p{lerp(coord(base[0]), coord(othr[0]), t),
                           lerp(coord(base[1]), coord(othr[1]), t),
                           lerp(coord(base[2]), coord(othr[2]), t)};
                    ev[e] = m.add_vertex(p);
                    welded.emplace(key, ev[e]);
                }
                for (const int* t = kMcTriTable[ci]; *t != -1; t += 3)
                    m.add_face(ev[t[0]], ev[t[2]], ev[t[1]]);
            }
    return m;
}

}  // namespace

Mesh iso(int r, const ScalarField& f) { return iso_impl(r, f, parallel_enabled()); }

Mesh iso_serial(int r, const ScalarField& f) { return iso_impl(r, f, false); }

}  // namespace procgen
