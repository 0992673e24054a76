#include "tuning/model.hpp"

#include "tuning/errors.hpp"

#include <cmath>
#include <sstream>

namespace tuning {

namespace {

void require_length(const Vector& v, std::size_t n, const char* name) {
  if (static_cast<std::size_t>(v.size()) != n) {
    std::ostringstream os;
    os << name << " has length " << v.size() << ", expected " << n;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

void require_finite(const Vector& v, const char* name) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v[k])) {
      std::ostringstream os;
      os << name << "[" << k << "] is not finite";
      throw Error(ErrorCode::NonFiniteValue, os.str());
    }
  }
}

}  // namespace

Vector expected_time_to_absorption(const FundamentalMatrix& m, const Vector& tau) {
  if (static_cast<std::size_t>(tau.size()) != m.size()) {
    throw Error(ErrorCode::DimensionMismatch, "tau does not match fundamental matrix");
  }
  return m.values() * tau;
}

Vector expected_time_discrete(const FundamentalMatrix& m_hat) {
  // Same product as the continuous form with unit sojourns, so the two agree bit for bit.
  return m_hat.values() * Vector::Ones(m_hat.values().cols());
}

Vector expected_reward_to_absorption(const FundamentalMatrix& m, const Vector& c) {
  if (static_cast<std::size_t>(c.size()) != m.size()) {
    throw Error(ErrorCode::DimensionMismatch, "income vector does not match fundamental matrix");
  }
  return m.values() * c;
}

TuningModel::TuningModel(BlockTransitionMatrix chain, ModelParameters params,
                         ModelOptions options)
    : chain_(std::move(chain)), params_(std::move(params)), options_(options) {
  validate_parameters();

  m_ = fundamental_matrix(chain_);
  b_ = absorption_probabilities(chain_, m_, options_.chain.row_sum);
  if (time_model() == TimeModel::Continuous) {
    time_ = expected_time_to_absorption(m_, continuous().tau);
  } else {
    time_ = expected_time_discrete(m_);
  }
  reward_ = expected_reward_to_absorption(m_, income());
  stability_ = check_stability(b_, options_.stability_tol);
}

TuningModel TuningModel::from_blocks(const Matrix& p00, const Matrix& p01,
                                     ModelParameters params, ModelOptions options) {
  return TuningModel(validate_chain(p00, p01, options.chain), std::move(params), options);
}

TimeModel TuningModel::time_model() const noexcept {
  return std::holds_alternative<ContinuousParameters>(params_) ? TimeModel::Continuous
                                                               : TimeModel::Discrete;
}

const ContinuousParameters& TuningModel::continuous() const {
  if (const auto* p = std::get_if<ContinuousParameters>(&params_)) return *p;
  throw Error(ErrorCode::InvalidInput, "model is discrete-time");
}

const DiscreteParameters& TuningModel::discrete() const {
  if (const auto* p = std::get_if<DiscreteParameters>(&params_)) return *p;
  throw Error(ErrorCode::InvalidInput, "model is continuous-time");
}

const Vector& TuningModel::income() const noexcept {
  return std::visit([](const auto& p) -> const Vector& { return p.c; }, params_);
}

const Vector& TuningModel::cost0() const noexcept {
  return std::visit([](const auto& p) -> const Vector& { return p.d0; }, params_);
}

const Vector& TuningModel::cost1() const noexcept {
  return std::visit([](const auto& p) -> const Vector& { return p.d1; }, params_);
}

void TuningModel::validate_parameters() {
  const std::size_t n = chain_.n_internal();

  require_length(income(), n, "c");
  require_length(cost0(), n, "d0");
  require_length(cost1(), n, "d1");
  require_finite(income(), "c");
  require_finite(cost0(), "d0");
  require_finite(cost1(), "d1");

  if (const auto* p = std::get_if<ContinuousParameters>(&params_)) {
    require_length(p->tau, n, "tau");
    require_length(p->mu0, n, "mu0");
    require_length(p->mu1, n, "mu1");
    require_finite(p->tau, "tau");
    require_finite(p->mu0, "mu0");
    require_finite(p->mu1, "mu1");
    for (std::size_t k = 0; k < n; ++k) {
      const auto i = static_cast<Eigen::Index>(k);
      if (!(p->tau[i] > 0.0)) {
        std::ostringstream os;
        os << "tau[" << k << "] must be positive, got " << p->tau[i];
        throw Error(ErrorCode::InvalidParameter, os.str());
      }
      if (p->mu0[i] < 0.0 || p->mu1[i] < 0.0) {
        std::ostringstream os;
        os << (p->mu0[i] < 0.0 ? "mu0[" : "mu1[") << k << "] must be nonnegative";
        throw Error(ErrorCode::InvalidParameter, os.str());
      }
    }
  }

  const auto check_cost = [&](const Vector& d, const char* name) {
    for (Eigen::Index k = 0; k < d.size(); ++k) {
      if (d[k] > 0.0) {
        std::ostringstream os;
        os.precision(12);
        os << name << "[" << k << "] = " << d[k] << " is a positive control cost";
        if (options_.strict_cost_signs) {
          throw Error(ErrorCode::InvalidParameter, os.str());
        }
        warnings_.push_back(os.str());
      }
    }
  };
  check_cost(cost0(), "d0");
  check_cost(cost1(), "d1");
}

}  // namespace tuning
