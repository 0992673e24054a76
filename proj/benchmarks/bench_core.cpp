#include "tuning/tuning.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

// Dense random chain with a guaranteed leak to both boundaries from every row.
tuning::TuningModel make_model(std::size_t n) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto N = static_cast<Eigen::Index>(n);
  tuning::Matrix p00(N, N);
  tuning::Matrix p01(N, 2);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = 0; j < N; ++j) p00(i, j) = u(rng);
    p01(i, 0) = 0.05 * static_cast<double>(n) * (0.5 + u(rng));
    p01(i, 1) = 0.05 * static_cast<double>(n) * (0.5 + u(rng));
    const double total = p00.row(i).sum() + p01.row(i).sum();
    p00.row(i) /= total;
    p01.row(i) /= total;
  }
  const auto v = [&](double lo, double hi) {
    tuning::Vector x(N);
    for (Eigen::Index k = 0; k < N; ++k) x[k] = lo + (hi - lo) * u(rng);
    return x;
  };
  return tuning::TuningModel::from_blocks(
      p00, p01,
      tuning::ContinuousParameters{v(0.5, 2), v(0, 5), v(-2, 0), v(-2, 0), v(0, 1), v(0, 1)});
}

void BM_FundamentalMatrix(benchmark::State& state) {
  const auto model = make_model(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tuning::fundamental_matrix(model.chain()));
  }
}
BENCHMARK(BM_FundamentalMatrix)->RangeMultiplier(4)->Range(4, 256);

void BM_OptimizeGrid(benchmark::State& state) {
  const auto model = make_model(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tuning::optimize(model, tuning::Sense::Maximize));
  }
}
BENCHMARK(BM_OptimizeGrid)->RangeMultiplier(4)->Range(4, 256);

void BM_SimulateIndex(benchmark::State& state) {
  const auto model = make_model(8);
  const auto policy = tuning::ControlPolicy::uniform(8);
  tuning::SimulationConfig config;
  config.n_cycles = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tuning::simulate_index(model, policy, config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateIndex)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
