#include "tuning/optimizer.hpp"

#include "tuning/errors.hpp"
#include "tuning/parallel.hpp"
#include "tuning/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tuning {

namespace {

constexpr std::size_t kGridChunk = 4096;

std::vector<double> test_function_grid(const LfifCoefficients& coeffs, std::size_t threads) {
  const std::size_t cells = coeffs.cells();
  std::vector<double> values(cells);
  const std::size_t chunks = (cells + kGridChunk - 1) / kGridChunk;
  parallel_for(chunks, worker_count(threads), [&](std::size_t chunk) {
    const std::size_t end = std::min(cells, (chunk + 1) * kGridChunk);
    for (std::size_t k = chunk * kGridChunk; k < end; ++k) {
      values[k] = coeffs.numerator()[k] / coeffs.denominator()[k];
    }
  });
  return values;
}

}  // namespace

std::vector<std::size_t> OptimizationResult::state_labels() const {
  std::vector<std::size_t> labels(best_point);
  for (auto& l : labels) l += kStateLabelOffset;
  return labels;
}

double tie_tolerance(double value) noexcept { return 1e-12 * std::max(1.0, std::abs(value)); }

OptimizationResult optimize_lfif(const LfifCoefficients& coeffs, Sense sense,
                                 std::size_t threads) {
  if (coeffs.cells() == 0) {
    throw Error(ErrorCode::EmptyActionSet, "no action points to optimise over");
  }
  const std::vector<double> values = test_function_grid(coeffs, threads);

  const auto extreme_it = sense == Sense::Maximize
                              ? std::max_element(values.begin(), values.end())
                              : std::min_element(values.begin(), values.end());
  const double extreme = *extreme_it;
  const double tol = tie_tolerance(extreme);

  OptimizationResult result;
  result.sense = sense;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (std::abs(values[k] - extreme) <= tol) {
      result.ties.push_back(coeffs.point_at(k));
    }
  }
  result.best_point = result.ties.front();
  result.best_value = values[coeffs.offset(result.best_point)];
  return result;
}

OptimizationResult optimize(const TuningModel& model, Sense sense,
                            const OptimizeOptions& options) {
  if (model.n_internal() == 0) {
    throw Error(ErrorCode::EmptyActionSet, "model has no internal states");
  }
  OptimizationResult result =
      optimize_lfif(coefficients(model, options.evaluation), sense, options.threads);
  result.policy =
      ControlPolicy::degenerate(model.n_internal(), result.best_point[0], result.best_point[1]);
  return result;
}

AuditReport dominance_audit(const TuningModel& model, std::size_t n_samples, std::uint64_t seed,
                            const EvaluationOptions& options) {
  const LfifCoefficients coeffs = coefficients(model, options);
  const auto best = optimize_lfif(coeffs, Sense::Maximize);
  const auto worst = optimize_lfif(coeffs, Sense::Minimize);

  AuditReport report;
  report.n_samples = n_samples;
  report.grid_max = best.best_value;
  report.grid_min = worst.best_value;
  report.sampled_max = n_samples ? -std::numeric_limits<double>::infinity()
                                 : std::numeric_limits<double>::quiet_NaN();
  report.sampled_min = n_samples ? std::numeric_limits<double>::infinity()
                                 : std::numeric_limits<double>::quiet_NaN();

  const std::size_t n = model.n_internal();
  const double upper = report.grid_max + tie_tolerance(report.grid_max);
  const double lower = report.grid_min - tie_tolerance(report.grid_min);
  for (std::size_t s = 0; s < n_samples; ++s) {
    Engine engine = substream(seed, s);
    auto a0 = sample_simplex(n, engine);
    auto a1 = sample_simplex(n, engine);
    const double value =
        evaluate_index(model, ControlPolicy(std::move(a0), std::move(a1)), options).value;
    report.sampled_max = std::max(report.sampled_max, value);
    report.sampled_min = std::min(report.sampled_min, value);
    if (value > upper) ++report.above_max;
    if (value < lower) ++report.below_min;
  }
  return report;
}

}  // namespace tuning
