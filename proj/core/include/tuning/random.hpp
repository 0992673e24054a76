#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace tuning {

using Engine = std::mt19937_64;

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for substream `index` of a run seeded with `seed`. Distinct indices
/// give statistically independent mt19937_64 streams, so work split by index
/// reproduces exactly regardless of scheduling.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept;

Engine substream(std::uint64_t seed, std::uint64_t index);

/// Uniform point on the (n-1)-simplex, i.e. Dirichlet(1, ..., 1), drawn as
/// normalised exponential spacings.
std::vector<double> sample_simplex(std::size_t n, Engine& engine);

}  // namespace tuning
