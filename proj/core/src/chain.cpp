#include "tuning/chain.hpp"

#include "tuning/errors.hpp"

#include <cmath>
#include <sstream>

namespace tuning {

namespace {

std::string describe(const char* what, Eigen::Index i, Eigen::Index j, double value) {
  std::ostringstream os;
  os.precision(12);
  os << what << " at (" << i << ", " << j << "): " << value;
  return os.str();
}

Matrix identity_minus(const Matrix& p00) {
  return Matrix::Identity(p00.rows(), p00.cols()) - p00;
}

}  // namespace

BlockTransitionMatrix validate_chain(const Matrix& p00, const Matrix& p01,
                                     const ChainTolerances& tol) {
  if (p00.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "chain needs at least one internal state");
  }
  if (p00.rows() != p00.cols()) {
    std::ostringstream os;
    os << "P00 must be square, got " << p00.rows() << "x" << p00.cols();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  if (p01.rows() != p00.rows() || p01.cols() != static_cast<Eigen::Index>(kBoundaryCount)) {
    std::ostringstream os;
    os << "P01 must be " << p00.rows() << "x2, got " << p01.rows() << "x" << p01.cols();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  if (!(tol.row_sum >= 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "row-sum tolerance must be nonnegative");
  }

  const auto check_block = [](const Matrix& block, const char* name) {
    for (Eigen::Index i = 0; i < block.rows(); ++i) {
      for (Eigen::Index j = 0; j < block.cols(); ++j) {
        const double v = block(i, j);
        if (!std::isfinite(v)) {
          throw Error(ErrorCode::NonFiniteValue, describe(name, i, j, v));
        }
        if (v < 0.0) {
          throw Error(ErrorCode::NegativeEntry, describe(name, i, j, v));
        }
      }
    }
  };
  check_block(p00, "P00");
  check_block(p01, "P01");

  for (Eigen::Index i = 0; i < p00.rows(); ++i) {
    const double sum = p00.row(i).sum() + p01.row(i).sum();
    if (std::abs(sum - 1.0) > tol.row_sum) {
      std::ostringstream os;
      os.precision(12);
      os << "row " << i << " sums to " << sum;
      throw Error(ErrorCode::RowSumViolation, os.str());
    }
  }

  const Eigen::PartialPivLU<Matrix> lu(identity_minus(p00));
  const double rcond = lu.rcond();
  if (!std::isfinite(rcond) || rcond * tol.max_condition < 1.0) {
    std::ostringstream os;
    os << "I - P00 is numerically singular (reciprocal condition estimate " << rcond
       << "); some internal state is not absorbed with probability one";
    throw Error(ErrorCode::NotAbsorbing, os.str());
  }

  return BlockTransitionMatrix(p00, p01);
}

FundamentalMatrix fundamental_matrix(const BlockTransitionMatrix& chain) {
  const Matrix a = identity_minus(chain.p00());
  const Eigen::PartialPivLU<Matrix> lu(a);
  const auto n = a.rows();

  Matrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    m.col(j) = lu.solve(Vector::Unit(n, j));
  }

  // Left residual, scaled by the size of M so large visit counts are judged
  // relative to their magnitude.
  const double residual = (m * a - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, m.cwiseAbs().rowwise().sum().maxCoeff());
  if (!m.allFinite() || !(residual <= 1e-8 * scale)) {
    std::ostringstream os;
    os << "fundamental matrix residual " << residual << " exceeds tolerance";
    throw Error(ErrorCode::SingularSystem, os.str());
  }
  return FundamentalMatrix(std::move(m));
}

AbsorptionMatrix absorption_probabilities(const BlockTransitionMatrix& chain,
                                          const FundamentalMatrix& m, double row_sum_tol) {
  if (m.size() != chain.n_internal()) {
    throw Error(ErrorCode::DimensionMismatch, "fundamental matrix does not match chain");
  }
  Matrix b = m.values() * chain.p01();
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    const double sum = b.row(i).sum();
    if (std::abs(sum - 1.0) > row_sum_tol) {
      std::ostringstream os;
      os.precision(12);
      os << "absorption row " << i << " sums to " << sum;
      throw Error(ErrorCode::RowSumViolation, os.str());
    }
  }
  return AbsorptionMatrix(std::move(b));
}

StabilityReport check_stability(const AbsorptionMatrix& b, double strict_tol) {
  StabilityReport report;
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t k = 0; k < kBoundaryCount; ++k) {
      const double p = b.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      if (!(p > strict_tol)) {
        report.violations.push_back({i, k, p});
      }
    }
  }
  return report;
}

}  // namespace tuning
