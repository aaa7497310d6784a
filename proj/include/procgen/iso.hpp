#pragma once

#include <functional>

#include "procgen/mesh.hpp"

namespace procgen {

using ScalarField = std::function<Real(Real, Real, Real)>;

// Marching-cubes surface of {f = 0} over [-1,1]^3 sampled on an r^3 lattice
// (r >= 2). Zero crossings are linearly interpolated along cell edges and
// welded via exact lattice-edge keys. A constant-sign field gives an empty
// mesh. iso() samples the field in parallel when enabled; iso_serial() is the
// plain path — both produce bitwise-identical meshes.
Mesh iso(int r, const ScalarField& f);
Mesh iso_serial(int r, const ScalarField& f);

}  // namespace procgen
