#pragma once

#include "tuning/functional.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tuning {

enum class Sense { Maximize, Minimize };

struct OptimizeOptions {
  EvaluationOptions evaluation{};
  /// Worker threads for the grid scan; 0 defers to worker_count().
  std::size_t threads = 0;
};

struct OptimizationResult {
  Sense sense = Sense::Maximize;
  /// Optimal action tuple in 0-based internal indexing.
  std::vector<std::size_t> best_point;
  double best_value = 0.0;
  /// Every point whose test-function value lies within the tie tolerance of
  /// the optimum, in lexicographic order; best_point is the first.
  std::vector<std::vector<std::size_t>> ties;
  /// Degenerate policy at best_point (two-factor model problems only).
  std::optional<ControlPolicy> policy;

  /// best_point shifted to the conventional state labels {2, ..., N}.
  std::vector<std::size_t> state_labels() const;
};

/// Tolerance under which two test-function values count as tied.
double tie_tolerance(double value) noexcept;

/// Exhaustive argmax/argmin of A/B over the full product grid. Ties resolve
/// to the lexicographically smallest point.
OptimizationResult optimize_lfif(const LfifCoefficients& coeffs, Sense sense,
                                 std::size_t threads = 0);

/// Optimal deterministic control for a tuning model: scans the test
/// function over all (l0, l1) and returns the degenerate policy there.
OptimizationResult optimize(const TuningModel& model, Sense sense,
                            const OptimizeOptions& options = {});

struct AuditReport {
  std::size_t n_samples = 0;
  /// Extremes of the test function over the grid.
  double grid_max = 0.0;
  double grid_min = 0.0;
  /// Extremes over sampled policies; NaN when n_samples == 0.
  double sampled_max = 0.0;
  double sampled_min = 0.0;
  /// Samples with I(alpha) > grid_max + tol, resp. < grid_min - tol.
  std::size_t above_max = 0;
  std::size_t below_min = 0;

  std::size_t violations() const noexcept { return above_max + below_min; }
};

/// Samples policies uniformly from the product of simplices and checks that
/// none beats the degenerate optimum in either direction.
AuditReport dominance_audit(const TuningModel& model, std::size_t n_samples, std::uint64_t seed,
                            const EvaluationOptions& options = {});

}  // namespace tuning
