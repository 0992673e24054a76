#include "tuning/random.hpp"

namespace tuning {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// No seed_seq: the mix already decorrelates indices, and one engine is built per cycle.
Engine substream(std::uint64_t seed, std::uint64_t index) {
  return Engine(substream_seed(seed, index));
}

std::vector<double> sample_simplex(std::size_t n, Engine& engine) {
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> x(n);
  double total = 0.0;
  for (auto& v : x) {
    v = exp1(engine);
    total += v;
  }
  for (auto& v : x) v /= total;
  return x;
}

}  // namespace tuning
