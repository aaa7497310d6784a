#pragma once

#include <string>

#include "procgen/mesh.hpp"

namespace procgen {

// ASCII OBJ: v/vn/f records, 1-based indices, '#' comments; polygon faces are
// fan-triangulated on load. Malformed input reports the line number.
Mesh load_obj(const std::string& path);

// Positions at 9 significant digits; vn lines (and f a//a style) only when
// the mesh is synced.
void save_obj(const Mesh& m, const std::string& path);

// Binary little-endian PLY, positions + faces only.
void save_ply(const Mesh& m, const std::string& path);

}  // namespace procgen
