#pragma once

#include <cstdint>

#include "procgen/geom.hpp"

namespace procgen {

// Gradient noise over R^3, output in [-1, 1], zero at integer lattice points.
// Overloads share the same lattice: noise(x) == noise(x, 0) == noise(x, 0, 0).
Real noise(Real x);
Real noise(Real x, Real y);
Real noise(Real x, Real y, Real z);

// Reshuffles the permutation table deterministically from the seed.
void noise_seed(std::uint64_t seed);

// Restores the classic reference permutation (the startup state).
void noise_reset();

}  // namespace procgen
