#pragma once

#include "nidx/types.hpp"

#include <cstdint>
#include <random>

namespace nidx {

using Rng = std::mt19937_64;

/// Mixes a master seed with a stream id (splitmix64 finalizer), used to hand
/// every restart / sub-task its own reproducible generator.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

Vec gaussian_vector(Rng& rng, int n);
Mat gaussian_matrix(Rng& rng, int rows, int cols);
double uniform(Rng& rng, double lo, double hi);

}  // namespace nidx
