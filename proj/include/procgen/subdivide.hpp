#pragma once

#include "procgen/mesh.hpp"

namespace procgen {

// In-place Loop subdivision: per level each face splits in four and every
// edge gains one vertex (F -> 4F, V -> V+E). Standard Loop vertex/edge masks;
// boundaries use the 1/8, 3/4, 1/8 and midpoint rules. Vertex handles stay
// valid; face handles are reissued. Non-manifold input throws
// UnsupportedInputError.
void smooth_subdivide(Mesh& m, int levels);

}  // namespace procgen
