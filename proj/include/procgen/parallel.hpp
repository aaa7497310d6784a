#pragma once

namespace procgen {

// Process-wide switch for the OpenMP paths in iso() and Mesh::sync().
// Both paths are bitwise-deterministic, so this only affects speed.
void set_parallel(bool enabled);
bool parallel_enabled();

}  // namespace procgen
