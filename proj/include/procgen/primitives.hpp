#pragma once

#include <string>

#include "procgen/mesh.hpp"

namespace procgen {

// All primitives are closed, manifold, outward-oriented and centred at the
// origin: icosahedron/sphere vertices sit at radius 1, the cube spans
// [-1,1]^3.
Mesh create_icosahedron();
Mesh create_cube();
Mesh create_sphere(int level = 2);  // icosphere; level >= 1 midpoint subdivisions

// kind: "sphere" | "cube" | "icosahedron"; level applies to the sphere only
// (-1 keeps the default).
Mesh create_primitive(const std::string& kind, int level = -1);

}  // namespace procgen
