#pragma once

#include "tuning/model.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace tuning {

/// The pair of controlling distributions: where the process is reinserted
/// after absorption at boundary 0 (alpha0) or boundary 1 (alpha1).
class ControlPolicy {
 public:
  /// Throws InvalidPolicy unless both vectors are nonnegative, finite, of
  /// equal length and sum to one within tol.
  ControlPolicy(std::vector<double> alpha0, std::vector<double> alpha1, double tol = 1e-9);

  static ControlPolicy degenerate(std::size_t n, std::size_t l0, std::size_t l1);
  static ControlPolicy uniform(std::size_t n);

  const std::vector<double>& alpha0() const noexcept { return alpha0_; }
  const std::vector<double>& alpha1() const noexcept { return alpha1_; }
  std::size_t size() const noexcept { return alpha0_.size(); }

 private:
  std::vector<double> alpha0_;
  std::vector<double> alpha1_;
};

/// Coefficients of a discrete linear-fractional integral functional over
/// U = U_1 x ... x U_N. Both tensors are stored flat in row-major order
/// (last factor varies fastest).
class LfifCoefficients {
 public:
  /// Throws DimensionMismatch on shape errors and MixedSignDenominator if
  /// the denominator tensor is not strictly of one sign.
  LfifCoefficients(std::vector<std::size_t> factor_sizes, std::vector<double> numerator,
                   std::vector<double> denominator);

  const std::vector<std::size_t>& factor_sizes() const noexcept { return sizes_; }
  std::size_t factors() const noexcept { return sizes_.size(); }
  std::size_t cells() const noexcept { return a_.size(); }

  const std::vector<double>& numerator() const noexcept { return a_; }
  const std::vector<double>& denominator() const noexcept { return b_; }

  /// Row-major offset of a point; throws IndexOutOfRange.
  std::size_t offset(std::span<const std::size_t> point) const;
  /// Inverse of offset().
  std::vector<std::size_t> point_at(std::size_t offset) const;

  double a(std::span<const std::size_t> point) const { return a_[offset(point)]; }
  double b(std::span<const std::size_t> point) const { return b_[offset(point)]; }

  /// +1 when B > 0 everywhere, -1 when B < 0 everywhere.
  int denominator_sign() const noexcept { return sign_; }

 private:
  std::vector<std::size_t> sizes_;
  std::vector<double> a_;
  std::vector<double> b_;
  int sign_ = 1;
};

struct IndexValue {
  double value;
  double numerator;
  double denominator;
};

struct EvaluationOptions {
  /// Evaluate even when some internal state cannot reach both boundaries.
  bool allow_unstable = false;
};

/// Two-factor coefficients A(l0, l1), B(l0, l1) of the continuous index:
///   A = [d0_l0 + r_l0] b_{l1,0} + [d1_l1 + r_l1] b_{l0,1}
///   B = [mu0_l0 + m_l0] b_{l1,0} + [mu1_l1 + m_l1] b_{l0,1}
LfifCoefficients coefficients_continuous(const TuningModel& model,
                                         const EvaluationOptions& options = {});

/// Discrete counterpart; the denominator reduces to b_{l1,0} + b_{l0,1}.
LfifCoefficients coefficients_discrete(const TuningModel& model,
                                       const EvaluationOptions& options = {});

/// Dispatches on the model's time model.
LfifCoefficients coefficients(const TuningModel& model, const EvaluationOptions& options = {});

/// Stationary mean specific profit evaluated directly from the boundary-chain
/// representation: per unit time (continuous) or per control cycle (discrete).
IndexValue evaluate_index(const TuningModel& model, const ControlPolicy& policy,
                          const EvaluationOptions& options = {});

/// Same index through the bilinear coefficient form.
IndexValue evaluate_index_via_coefficients(const LfifCoefficients& coeffs,
                                           const ControlPolicy& policy);

/// General N-factor functional: the ratio of the two multilinear sums.
double evaluate_lfif(const LfifCoefficients& coeffs,
                     std::span<const std::vector<double>> distributions);

/// C(point) = A(point) / B(point).
double test_function(const LfifCoefficients& coeffs, std::span<const std::size_t> point);

}  // namespace tuning
