#include "tuning/functional.hpp"

#include "tuning/errors.hpp"

#include <cmath>
#include <sstream>

namespace tuning {

namespace {

void check_distribution(std::span<const double> alpha, double tol, const char* name) {
  double sum = 0.0;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (!std::isfinite(alpha[k]) || alpha[k] < 0.0) {
      std::ostringstream os;
      os << name << "[" << k << "] = " << alpha[k] << " is not a probability";
      throw Error(ErrorCode::InvalidPolicy, os.str());
    }
    sum += alpha[k];
  }
  if (alpha.empty() || std::abs(sum - 1.0) > tol) {
    std::ostringstream os;
    os.precision(12);
    os << name << " sums to " << sum << ", expected 1";
    throw Error(ErrorCode::InvalidPolicy, os.str());
  }
}

void require_evaluable(const TuningModel& model, const EvaluationOptions& options) {
  if (!model.stable() && !options.allow_unstable) {
    const auto& v = model.stability().violations.front();
    std::ostringstream os;
    os << "internal state " << v.state << " (label " << v.state + kStateLabelOffset
       << ") reaches boundary " << v.boundary << " with probability " << v.probability;
    throw Error(ErrorCode::UnstableModel, os.str());
  }
}

void require_policy_size(const TuningModel& model, const ControlPolicy& policy) {
  if (policy.size() != model.n_internal()) {
    std::ostringstream os;
    os << "policy has " << policy.size() << " states, model has " << model.n_internal();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

// The two columns of B are used in their stored form; the rows must still be
// complementary.
void check_complementary(const TuningModel& model) {
  const auto& b = model.absorption();
  const double tol = std::max(1e-9, model.options().chain.row_sum);
  for (std::size_t l = 0; l < b.size(); ++l) {
    if (std::abs(b.to_one(l) - (1.0 - b.to_zero(l))) > tol) {
      std::ostringstream os;
      os << "absorption row " << l << " is not complementary";
      throw Error(ErrorCode::RowSumViolation, os.str());
    }
  }
}

LfifCoefficients build_two_factor(const TuningModel& model, const Vector& reward0,
                                  const Vector& reward1, const Vector* time0,
                                  const Vector* time1) {
  const std::size_t n = model.n_internal();
  const auto& b = model.absorption();
  std::vector<double> a(n * n);
  std::vector<double> d(n * n);
  for (std::size_t l0 = 0; l0 < n; ++l0) {
    for (std::size_t l1 = 0; l1 < n; ++l1) {
      const auto i0 = static_cast<Eigen::Index>(l0);
      const auto i1 = static_cast<Eigen::Index>(l1);
      const double w0 = b.to_zero(l1);  // b_{l1,0}
      const double w1 = b.to_one(l0);   // b_{l0,1}
      a[l0 * n + l1] = reward0[i0] * w0 + reward1[i1] * w1;
      d[l0 * n + l1] = time0 ? (*time0)[i0] * w0 + (*time1)[i1] * w1 : w0 + w1;
      if (!(d[l0 * n + l1] > 0.0)) {
        std::ostringstream os;
        os << "B(" << l0 << ", " << l1 << ") = " << d[l0 * n + l1] << " is not positive";
        throw Error(ErrorCode::NonPositiveDenominatorCoefficient, os.str());
      }
    }
  }
  return LfifCoefficients({n, n}, std::move(a), std::move(d));
}

double dot(std::span<const double> x, const Vector& y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[static_cast<Eigen::Index>(k)];
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------

ControlPolicy::ControlPolicy(std::vector<double> alpha0, std::vector<double> alpha1, double tol)
    : alpha0_(std::move(alpha0)), alpha1_(std::move(alpha1)) {
  if (alpha0_.size() != alpha1_.size()) {
    throw Error(ErrorCode::InvalidPolicy, "alpha0 and alpha1 differ in length");
  }
  check_distribution(alpha0_, tol, "alpha0");
  check_distribution(alpha1_, tol, "alpha1");
}

ControlPolicy ControlPolicy::degenerate(std::size_t n, std::size_t l0, std::size_t l1) {
  if (l0 >= n || l1 >= n) {
    throw Error(ErrorCode::IndexOutOfRange, "degenerate policy point outside the state set");
  }
  std::vector<double> a0(n, 0.0);
  std::vector<double> a1(n, 0.0);
  a0[l0] = 1.0;
  a1[l1] = 1.0;
  return ControlPolicy(std::move(a0), std::move(a1));
}

ControlPolicy ControlPolicy::uniform(std::size_t n) {
  std::vector<double> a(n, 1.0 / static_cast<double>(n));
  return ControlPolicy(a, a);
}

LfifCoefficients::LfifCoefficients(std::vector<std::size_t> factor_sizes,
                                   std::vector<double> numerator,
                                   std::vector<double> denominator)
    : sizes_(std::move(factor_sizes)), a_(std::move(numerator)), b_(std::move(denominator)) {
  if (sizes_.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "functional needs at least one factor");
  }
  std::size_t cells = 1;
  for (std::size_t s : sizes_) {
    if (s == 0) throw Error(ErrorCode::EmptyActionSet, "factor of size zero");
    cells *= s;
  }
  if (a_.size() != cells || b_.size() != cells) {
    std::ostringstream os;
    os << "coefficient tensors have " << a_.size() << "/" << b_.size() << " cells, shape needs "
       << cells;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  sign_ = b_.front() > 0.0 ? 1 : -1;
  for (std::size_t k = 0; k < cells; ++k) {
    if (!std::isfinite(a_[k]) || !std::isfinite(b_[k])) {
      throw Error(ErrorCode::NonFiniteValue, "coefficient tensors must be finite");
    }
    if (!(b_[k] * sign_ > 0.0)) {
      std::ostringstream os;
      os << "denominator coefficient at offset " << k << " breaks strict constant sign";
      throw Error(ErrorCode::MixedSignDenominator, os.str());
    }
  }
}

std::size_t LfifCoefficients::offset(std::span<const std::size_t> point) const {
  if (point.size() != sizes_.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "point has wrong number of coordinates");
  }
  std::size_t off = 0;
  for (std::size_t f = 0; f < sizes_.size(); ++f) {
    if (point[f] >= sizes_[f]) {
      std::ostringstream os;
      os << "coordinate " << f << " = " << point[f] << " outside [0, " << sizes_[f] << ")";
      throw Error(ErrorCode::IndexOutOfRange, os.str());
    }
    off = off * sizes_[f] + point[f];
  }
  return off;
}

std::vector<std::size_t> LfifCoefficients::point_at(std::size_t off) const {
  std::vector<std::size_t> point(sizes_.size());
  for (std::size_t f = sizes_.size(); f-- > 0;) {
    point[f] = off % sizes_[f];
    off /= sizes_[f];
  }
  return point;
}

// ---------------------------------------------------------------------------

LfifCoefficients coefficients_continuous(const TuningModel& model,
                                         const EvaluationOptions& options) {
  const auto& p = model.continuous();
  require_evaluable(model, options);
  check_complementary(model);
  const Vector& r = model.reward_to_absorption();
  const Vector& m = model.time_to_absorption();
  const Vector reward0 = p.d0 + r;
  const Vector reward1 = p.d1 + r;
  const Vector time0 = p.mu0 + m;
  const Vector time1 = p.mu1 + m;
  return build_two_factor(model, reward0, reward1, &time0, &time1);
}

LfifCoefficients coefficients_discrete(const TuningModel& model,
                                       const EvaluationOptions& options) {
  const auto& p = model.discrete();
  require_evaluable(model, options);
  check_complementary(model);
  const Vector& r = model.reward_to_absorption();
  const Vector reward0 = p.d0 + r;
  const Vector reward1 = p.d1 + r;
  return build_two_factor(model, reward0, reward1, nullptr, nullptr);
}

LfifCoefficients coefficients(const TuningModel& model, const EvaluationOptions& options) {
  return model.time_model() == TimeModel::Continuous ? coefficients_continuous(model, options)
                                                     : coefficients_discrete(model, options);
}

IndexValue evaluate_index(const TuningModel& model, const ControlPolicy& policy,
                          const EvaluationOptions& options) {
  require_policy_size(model, policy);
  require_evaluable(model, options);

  const std::size_t n = model.n_internal();
  const auto& b = model.absorption();
  const Vector& r = model.reward_to_absorption();

  // Stationary weights of the boundary chain, up to normalisation:
  // entering 0 comes from cycles started at 1, entering 1 from cycles started at 0.
  double into_zero = 0.0;  // sum_l alpha1_l b_l0
  double into_one = 0.0;   // sum_l alpha0_l (1 - b_l0)
  for (std::size_t l = 0; l < n; ++l) {
    into_zero += policy.alpha1()[l] * b.to_zero(l);
    into_one += policy.alpha0()[l] * (1.0 - b.to_zero(l));
  }

  const Vector reward0 = model.cost0() + r;
  const Vector reward1 = model.cost1() + r;
  const double numerator =
      dot(policy.alpha0(), reward0) * into_zero + dot(policy.alpha1(), reward1) * into_one;

  double denominator = 0.0;
  if (model.time_model() == TimeModel::Continuous) {
    const auto& p = model.continuous();
    const Vector time0 = p.mu0 + model.time_to_absorption();
    const Vector time1 = p.mu1 + model.time_to_absorption();
    denominator =
        dot(policy.alpha0(), time0) * into_zero + dot(policy.alpha1(), time1) * into_one;
  } else {
    denominator = into_zero + into_one;
  }

  if (denominator == 0.0 || !std::isfinite(denominator)) {
    throw Error(ErrorCode::ZeroDenominator, "index denominator vanishes for this policy");
  }
  return {numerator / denominator, numerator, denominator};
}

IndexValue evaluate_index_via_coefficients(const LfifCoefficients& coeffs,
                                           const ControlPolicy& policy) {
  const auto& sizes = coeffs.factor_sizes();
  if (sizes.size() != 2 || sizes[0] != policy.size() || sizes[1] != policy.size()) {
    throw Error(ErrorCode::DimensionMismatch, "policy does not match two-factor coefficients");
  }
  const std::size_t n = policy.size();
  const auto& a0 = policy.alpha0();
  const auto& a1 = policy.alpha1();
  double numerator = 0.0;
  double denominator = 0.0;
  for (std::size_t l0 = 0; l0 < n; ++l0) {
    for (std::size_t l1 = 0; l1 < n; ++l1) {
      const double w = a0[l0] * a1[l1];
      numerator += coeffs.numerator()[l0 * n + l1] * w;
      denominator += coeffs.denominator()[l0 * n + l1] * w;
    }
  }
  if (denominator == 0.0) {
    throw Error(ErrorCode::ZeroDenominator, "functional denominator vanishes");
  }
  return {numerator / denominator, numerator, denominator};
}

double evaluate_lfif(const LfifCoefficients& coeffs,
                     std::span<const std::vector<double>> distributions) {
  const auto& sizes = coeffs.factor_sizes();
  if (distributions.size() != sizes.size()) {
    std::ostringstream os;
    os << "got " << distributions.size() << " distributions for " << sizes.size() << " factors";
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  for (std::size_t f = 0; f < sizes.size(); ++f) {
    if (distributions[f].size() != sizes[f]) {
      std::ostringstream os;
      os << "distribution " << f << " has " << distributions[f].size() << " entries, factor has "
         << sizes[f];
      throw Error(ErrorCode::DimensionMismatch, os.str());
    }
    check_distribution(distributions[f], 1e-9, "distribution");
  }

  // Odometer over U in row-major order.
  std::vector<std::size_t> point(sizes.size(), 0);
  double numerator = 0.0;
  double denominator = 0.0;
  for (std::size_t cell = 0; cell < coeffs.cells(); ++cell) {
    double w = 1.0;
    for (std::size_t f = 0; f < sizes.size(); ++f) w *= distributions[f][point[f]];
    if (w != 0.0) {
      numerator += coeffs.numerator()[cell] * w;
      denominator += coeffs.denominator()[cell] * w;
    }
    for (std::size_t f = sizes.size(); f-- > 0;) {
      if (++point[f] < sizes[f]) break;
      point[f] = 0;
    }
  }
  if (denominator == 0.0) {
    throw Error(ErrorCode::ZeroDenominator, "functional denominator vanishes");
  }
  return numerator / denominator;
}

double test_function(const LfifCoefficients& coeffs, std::span<const std::size_t> point) {
  const std::size_t off = coeffs.offset(point);
  return coeffs.numerator()[off] / coeffs.denominator()[off];
}

}  // namespace tuning
