#include "tuning/simulator.hpp"

#include "tuning/errors.hpp"
#include "tuning/parallel.hpp"
#include "tuning/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <sstream>

namespace tuning {

namespace {

constexpr std::size_t kBlockCycles = 8192;
constexpr std::size_t kRunChunk = 4096;

/// Cumulative table over a finite set of outcomes with exact 1.0 at the last
/// reachable outcome, so zero-probability entries are never drawn.
class Categorical {
 public:
  template <typename Weights>
  explicit Categorical(const Weights& w) : cum_(static_cast<std::size_t>(w.size())) {
    double total = 0.0;
    std::size_t last = 0;
    for (std::size_t k = 0; k < cum_.size(); ++k) {
      const double p = w[static_cast<decltype(w.size())>(k)];
      total += p;
      cum_[k] = total;
      if (p > 0.0) last = k;
    }
    for (std::size_t k = 0; k < cum_.size(); ++k) cum_[k] = k >= last ? 1.0 : cum_[k] / total;
  }

  std::size_t draw(double u) const {
    return static_cast<std::size_t>(std::upper_bound(cum_.begin(), cum_.end(), u) - cum_.begin());
  }

 private:
  std::vector<double> cum_;
};

/// Row i covers [P00 row i | P01 row i]; outcome n is boundary 0, n + 1 boundary 1.
class ChainSampler {
 public:
  explicit ChainSampler(const BlockTransitionMatrix& chain) : n_(chain.n_internal()) {
    rows_.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      Vector row(static_cast<Eigen::Index>(n_ + kBoundaryCount));
      row << chain.p00().row(r).transpose(), chain.p01().row(r).transpose();
      rows_.emplace_back(row);
    }
  }

  std::size_t n_internal() const noexcept { return n_; }

  std::size_t step(std::size_t state, Engine& engine) const {
    return rows_[state].draw(std::uniform_real_distribution<double>(0.0, 1.0)(engine));
  }

 private:
  std::size_t n_;
  std::vector<Categorical> rows_;
};

[[noreturn]] void nonconvergent(std::uint64_t cap) {
  std::ostringstream os;
  os << "a single cycle exceeded " << cap << " embedded steps";
  throw Error(ErrorCode::NonconvergentCycle, os.str());
}

struct CycleOutcome {
  double reward = 0.0;
  double time = 0.0;
  std::uint64_t steps = 0;
  std::uint8_t end = 0;
};

class CycleRunner {
 public:
  CycleRunner(const TuningModel& model, const ControlPolicy& policy,
              const SimulationConfig& config)
      : model_(model),
        config_(config),
        chain_(model.chain()),
        entry_{Categorical(policy.alpha0()), Categorical(policy.alpha1())},
        continuous_(model.time_model() == TimeModel::Continuous) {}

  CycleOutcome run(std::size_t cycle, std::size_t boundary) const {
    Engine engine = substream(config_.seed, cycle);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const std::size_t n = chain_.n_internal();
    const auto& c = model_.income();

    CycleOutcome out;
    std::size_t state = entry_[boundary].draw(uniform(engine));
    const auto k = static_cast<Eigen::Index>(state);
    out.reward = boundary == 0 ? model_.cost0()[k] : model_.cost1()[k];
    if (continuous_) {
      const auto& p = model_.continuous();
      out.time = boundary == 0 ? p.mu0[k] : p.mu1[k];
    }
    out.steps = 1;

    while (true) {
      const auto s = static_cast<Eigen::Index>(state);
      out.reward += c[s];
      if (continuous_) out.time += sojourn(model_.continuous().tau[s], engine);
      ++out.steps;
      if (out.steps > config_.step_cap) nonconvergent(config_.step_cap);
      const std::size_t next = chain_.step(state, engine);
      if (next >= n) {
        out.end = static_cast<std::uint8_t>(next - n);
        return out;
      }
      state = next;
    }
  }

 private:
  double sojourn(double mean, Engine& engine) const {
    if (config_.holding_time_law == HoldingTimeLaw::DeterministicMean) return mean;
    return std::exponential_distribution<double>(1.0 / mean)(engine);
  }

  const TuningModel& model_;
  const SimulationConfig& config_;
  ChainSampler chain_;
  std::array<Categorical, 2> entry_;
  bool continuous_;
};

struct BatchSum {
  double reward = 0.0;
  double time = 0.0;
};

}  // namespace

SimulationEstimate simulate_index(const TuningModel& model, const ControlPolicy& policy,
                                  const SimulationConfig& config) {
  if (policy.size() != model.n_internal()) {
    throw Error(ErrorCode::DimensionMismatch, "policy does not match model");
  }
  if (config.n_cycles == 0) {
    throw Error(ErrorCode::InvalidParameter, "n_cycles must be at least 1");
  }
  if (!model.stable() && !config.evaluation.allow_unstable) {
    throw Error(ErrorCode::UnstableModel, "simulation requires a stable model");
  }

  const bool continuous = model.time_model() == TimeModel::Continuous;
  const CycleRunner runner(model, policy, config);
  const std::size_t workers = worker_count(config.threads);
  const std::size_t n_cycles = config.n_cycles;
  const std::size_t n_batches = std::max<std::size_t>(1, std::min(config.batches, n_cycles));

  std::vector<BatchSum> batches(n_batches);
  SimulationEstimate est;
  est.n_cycles = n_cycles;
  est.batches_used = n_batches;

  // The starting boundary of cycle i is where cycle i-1 ended. Each cycle's
  // outcome from a given boundary is a pure function of (seed, i, boundary),
  // so with several workers both branches are computed ahead and the chain
  // is stitched afterwards; a single worker computes only the needed branch.
  std::size_t boundary = 0;
  std::size_t batch = 0;
  std::size_t batch_end = n_cycles / n_batches + (0 < n_cycles % n_batches ? 1 : 0);
  std::array<std::vector<CycleOutcome>, 2> speculative;
  // A branch that is never stitched in must not fail the run.
  std::array<std::vector<std::exception_ptr>, 2> failures;

  for (std::size_t block = 0; block < n_cycles; block += kBlockCycles) {
    const std::size_t len = std::min(kBlockCycles, n_cycles - block);
    if (workers > 1) {
      for (std::size_t b = 0; b < kBoundaryCount; ++b) {
        speculative[b].assign(len, {});
        failures[b].assign(len, nullptr);
      }
      const std::size_t chunks = (len + 255) / 256;
      parallel_for(chunks, workers, [&](std::size_t chunk) {
        const std::size_t end = std::min(len, (chunk + 1) * 256);
        for (std::size_t j = chunk * 256; j < end; ++j) {
          for (std::size_t b = 0; b < kBoundaryCount; ++b) {
            try {
              speculative[b][j] = runner.run(block + j, b);
            } catch (...) {
              failures[b][j] = std::current_exception();
            }
          }
        }
      });
    }
    for (std::size_t j = 0; j < len; ++j) {
      const std::size_t cycle = block + j;
      if (workers > 1 && failures[boundary][j]) std::rethrow_exception(failures[boundary][j]);
      const CycleOutcome out = workers > 1 ? speculative[boundary][j] : runner.run(cycle, boundary);
      while (cycle >= batch_end) {
        ++batch;
        batch_end += n_cycles / n_batches + (batch < n_cycles % n_batches ? 1 : 0);
      }
      batches[batch].reward += out.reward;
      batches[batch].time += continuous ? out.time : 1.0;
      est.total_steps += out.steps;
      boundary = out.end;
    }
  }

  for (const auto& b : batches) {
    est.total_reward += b.reward;
    est.total_time += b.time;
  }
  if (!(est.total_time > 0.0)) {
    throw Error(ErrorCode::ZeroDenominator, "simulated trajectory accrued no time");
  }
  est.point_estimate = est.total_reward / est.total_time;
  est.per_step_estimate = est.total_reward / static_cast<double>(est.total_steps);

  if (n_batches < 2) {
    est.insufficient_batches = true;
    est.standard_error = 0.0;
    return est;
  }
  std::vector<double> ratios;
  ratios.reserve(n_batches);
  for (const auto& b : batches) ratios.push_back(b.reward / b.time);
  double mean = 0.0;
  for (double r : ratios) mean += r;
  mean /= static_cast<double>(n_batches);
  double ss = 0.0;
  for (double r : ratios) ss += (r - mean) * (r - mean);
  const double var = ss / static_cast<double>(n_batches - 1);
  est.standard_error = std::sqrt(var / static_cast<double>(n_batches));
  return est;
}

namespace {

void check_start(const BlockTransitionMatrix& chain, std::size_t start, std::size_t n_runs) {
  if (start >= chain.n_internal()) {
    throw Error(ErrorCode::IndexOutOfRange, "start state outside the internal set");
  }
  if (n_runs == 0) throw Error(ErrorCode::InvalidParameter, "n_runs must be at least 1");
}

// Walks one absorption run, calling on_visit(state) for each internal visit.
template <typename OnVisit>
std::size_t walk(const ChainSampler& sampler, std::size_t start, Engine& engine,
                 OnVisit&& on_visit) {
  constexpr std::uint64_t cap = 10'000'000;
  std::size_t state = start;
  for (std::uint64_t steps = 1;; ++steps) {
    on_visit(state);
    if (steps > cap) nonconvergent(cap);
    const std::size_t next = sampler.step(state, engine);
    if (next >= sampler.n_internal()) return next - sampler.n_internal();
    state = next;
  }
}

}  // namespace

AbsorptionEstimate estimate_absorption(const BlockTransitionMatrix& chain, std::size_t start,
                                       std::size_t n_runs, std::uint64_t seed,
                                       std::size_t threads) {
  check_start(chain, start, n_runs);
  const ChainSampler sampler(chain);
  const std::size_t chunks = (n_runs + kRunChunk - 1) / kRunChunk;
  std::vector<std::size_t> zeros(chunks, 0);
  parallel_for(chunks, worker_count(threads), [&](std::size_t chunk) {
    const std::size_t end = std::min(n_runs, (chunk + 1) * kRunChunk);
    for (std::size_t run = chunk * kRunChunk; run < end; ++run) {
      Engine engine = substream(seed, run);
      if (walk(sampler, start, engine, [](std::size_t) {}) == 0) ++zeros[chunk];
    }
  });
  std::size_t total = 0;
  for (std::size_t z : zeros) total += z;

  AbsorptionEstimate est;
  est.n_runs = n_runs;
  est.to_zero = static_cast<double>(total) / static_cast<double>(n_runs);
  est.to_one = 1.0 - est.to_zero;
  return est;
}

VisitEstimate estimate_visits(const BlockTransitionMatrix& chain, std::size_t start,
                              std::size_t n_runs, std::uint64_t seed, std::size_t threads) {
  check_start(chain, start, n_runs);
  const ChainSampler sampler(chain);
  const std::size_t n = chain.n_internal();
  const std::size_t chunks = (n_runs + kRunChunk - 1) / kRunChunk;
  std::vector<std::vector<double>> sums(chunks, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> squares(chunks, std::vector<double>(n, 0.0));

  parallel_for(chunks, worker_count(threads), [&](std::size_t chunk) {
    std::vector<double> counts(n);
    const std::size_t end = std::min(n_runs, (chunk + 1) * kRunChunk);
    for (std::size_t run = chunk * kRunChunk; run < end; ++run) {
      std::fill(counts.begin(), counts.end(), 0.0);
      Engine engine = substream(seed, run);
      walk(sampler, start, engine, [&](std::size_t s) { counts[s] += 1.0; });
      for (std::size_t j = 0; j < n; ++j) {
        sums[chunk][j] += counts[j];
        squares[chunk][j] += counts[j] * counts[j];
      }
    }
  });

  VisitEstimate est;
  est.n_runs = n_runs;
  est.mean.assign(n, 0.0);
  est.standard_error.assign(n, 0.0);
  const double runs = static_cast<double>(n_runs);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    double sq = 0.0;
    for (std::size_t c = 0; c < chunks; ++c) {
      s += sums[c][j];
      sq += squares[c][j];
    }
    const double mean = s / runs;
    est.mean[j] = mean;
    if (n_runs > 1) {
      const double var = std::max(0.0, (sq - runs * mean * mean) / (runs - 1.0));
      est.standard_error[j] = std::sqrt(var / runs);
    }
  }
  return est;
}

}  // namespace tuning
