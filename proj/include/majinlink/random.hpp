#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace majinlink {

// std::mt19937_64 output is fixed by the standard; the distributions are not,
// so all draws go through the helpers below to stay reproducible across
// standard libraries.
using Rng = std::mt19937_64;

/// Uniform integer in [0, bound). bound must be > 0.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

/// Uniform double in [0, 1) with 53 bits of randomness.
double uniform01(Rng& rng);

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for an independent stream keyed by a label, e.g. one per task.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

}  // namespace majinlink
