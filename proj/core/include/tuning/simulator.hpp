#pragma once

// Monte Carlo replica of the controlled process. It shares no code path with
// the analytic index: trajectories are drawn step by step from the embedded
// chain and rewards are accumulated along them.

#include "tuning/functional.hpp"

#include <cstdint>
#include <vector>

namespace tuning {

enum class HoldingTimeLaw { DeterministicMean, ExponentialMean };

struct SimulationConfig {
  std::size_t n_cycles = 100000;
  std::uint64_t seed = 1;
  /// Sojourn law per visit; the mean is always tau. Ignored by discrete models.
  HoldingTimeLaw holding_time_law = HoldingTimeLaw::DeterministicMean;
  std::size_t batches = 30;
  /// Embedded steps allowed inside one cycle before giving up.
  std::uint64_t step_cap = 10'000'000;
  /// 0 defers to worker_count().
  std::size_t threads = 0;
  EvaluationOptions evaluation{};
};

struct SimulationEstimate {
  double point_estimate = 0.0;
  double standard_error = 0.0;
  std::size_t n_cycles = 0;
  std::size_t batches_used = 0;
  /// Fewer than two batches: standard_error is reported as 0.
  bool insufficient_batches = false;
  double total_reward = 0.0;
  /// Accrued time (continuous) or number of cycles (discrete).
  double total_time = 0.0;
  /// Embedded steps, counting each control transfer as one step.
  std::uint64_t total_steps = 0;
  /// total_reward / total_steps; the per-time-step reading of a discrete model.
  double per_step_estimate = 0.0;
};

/// Simulates n_cycles control cycles starting at boundary 0. A cycle draws an
/// entry state k from alpha^(b), accrues d^(b)_k (and mu^(b)_k time), then runs
/// the chain from k, accruing c_j and one sojourn per visit, until absorption.
/// Continuous estimate: reward / time. Discrete estimate: reward per cycle.
/// Standard error from batch means over contiguous batches of cycles.
///
/// Cycle i draws from substream(seed, i); results do not depend on threads.
SimulationEstimate simulate_index(const TuningModel& model, const ControlPolicy& policy,
                                  const SimulationConfig& config);

struct AbsorptionEstimate {
  double to_zero = 0.0;
  double to_one = 0.0;
  std::size_t n_runs = 0;
};

/// Empirical absorption frequencies from internal state `start`.
AbsorptionEstimate estimate_absorption(const BlockTransitionMatrix& chain, std::size_t start,
                                       std::size_t n_runs, std::uint64_t seed,
                                       std::size_t threads = 0);

struct VisitEstimate {
  std::vector<double> mean;
  std::vector<double> standard_error;
  std::size_t n_runs = 0;
};

/// Empirical mean visit counts per internal state before absorption, from
/// `start`; comparable with row `start` of the fundamental matrix.
VisitEstimate estimate_visits(const BlockTransitionMatrix& chain, std::size_t start,
                              std::size_t n_runs, std::uint64_t seed, std::size_t threads = 0);

}  // namespace tuning
