#pragma once

#include <vector>

#include "procgen/mesh.hpp"

namespace procgen {

// Fan of cell-tuples over the faces around a tip vertex, one pos per face in
// ring order. Produced by inset/extrude; consumed by capov and the spike
// grower.
struct Cap {
    Mesh* m = nullptr;
    std::vector<Pos> fan;
};

// Duplicates the one-ring loop of v (k new vertices), stitches the two loops
// with 2k side triangles and scales the new loop toward its centroid by s.
// v keeps its valence against the new loop. The faces previously around v are
// replaced, so handles to them go stale.
Cap inset(Mesh& m, VertexHandle v, Real s);

// inset(m, v, 1) followed by translating v and the new loop by
// normalized(d) * mag.
Cap extrude(Mesh& m, VertexHandle v, const Vec3& d, Real mag);

// Outer-ring vertices of the cap in fan order, tip excluded.
std::vector<VertexHandle> capov(const Cap& cap);

// Projects every vertex in vl along n onto the plane through p.
void flattenvl(Mesh& m, const std::vector<VertexHandle>& vl, const Vec3& p,
               const Vec3& n);

}  // namespace procgen
