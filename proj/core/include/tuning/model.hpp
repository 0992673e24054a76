#pragma once

#include "tuning/chain.hpp"

#include <string>
#include <variant>
#include <vector>

namespace tuning {

enum class TimeModel { Continuous, Discrete };

/// Mean characteristics of the semi-Markov (continuous-time) version.
struct ContinuousParameters {
  Vector tau;  // mean sojourn per visit
  Vector c;    // mean income per stay
  Vector d0;   // control cost, boundary 0 -> k
  Vector d1;   // control cost, boundary 1 -> k
  Vector mu0;  // control duration, boundary 0 -> k
  Vector mu1;  // control duration, boundary 1 -> k
};

/// Discrete-time version: unit sojourns and one-step control transfers.
struct DiscreteParameters {
  Vector c;
  Vector d0;
  Vector d1;
};

using ModelParameters = std::variant<ContinuousParameters, DiscreteParameters>;

struct ModelOptions {
  ChainTolerances chain{};
  /// Threshold that absorption probabilities must strictly exceed.
  double stability_tol = 0.0;
  /// Positive control costs are an error when set, otherwise a warning.
  bool strict_cost_signs = true;
};

Vector expected_time_to_absorption(const FundamentalMatrix& m, const Vector& tau);
Vector expected_time_discrete(const FundamentalMatrix& m_hat);
Vector expected_reward_to_absorption(const FundamentalMatrix& m, const Vector& c);

/// Chain plus cost/time characteristics, with every derived quantity
/// (M, B, m, r and the stability verdict) computed once at construction.
class TuningModel {
 public:
  TuningModel(BlockTransitionMatrix chain, ModelParameters params, ModelOptions options = {});

  /// Validates the raw blocks first.
  static TuningModel from_blocks(const Matrix& p00, const Matrix& p01, ModelParameters params,
                                 ModelOptions options = {});

  std::size_t n_internal() const noexcept { return chain_.n_internal(); }
  TimeModel time_model() const noexcept;

  const BlockTransitionMatrix& chain() const noexcept { return chain_; }
  const ModelParameters& parameters() const noexcept { return params_; }
  const ModelOptions& options() const noexcept { return options_; }

  /// Throws if the model is discrete.
  const ContinuousParameters& continuous() const;
  /// Throws if the model is continuous.
  const DiscreteParameters& discrete() const;

  /// Per-stay income (c or c-hat) and control costs, whichever version.
  const Vector& income() const noexcept;
  const Vector& cost0() const noexcept;
  const Vector& cost1() const noexcept;

  const FundamentalMatrix& fundamental() const noexcept { return m_; }
  const AbsorptionMatrix& absorption() const noexcept { return b_; }
  /// Expected time until absorption from each internal state.
  const Vector& time_to_absorption() const noexcept { return time_; }
  /// Expected income until absorption from each internal state.
  const Vector& reward_to_absorption() const noexcept { return reward_; }
  const StabilityReport& stability() const noexcept { return stability_; }
  bool stable() const noexcept { return stability_.stable(); }

  /// Non-fatal findings such as positive control costs under relaxed checks.
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  void validate_parameters();

  BlockTransitionMatrix chain_;
  ModelParameters params_;
  ModelOptions options_;
  FundamentalMatrix m_;
  AbsorptionMatrix b_;
  Vector time_;
  Vector reward_;
  StabilityReport stability_;
  std::vector<std::string> warnings_;
};

}  // namespace tuning
