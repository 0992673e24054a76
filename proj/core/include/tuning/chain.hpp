#pragma once

// Absorbing-chain linear algebra.
//
// Internal (admissible) states are indexed 0..n-1. Internal index i
// corresponds to the conventional state label i + 2; the two boundary
// (absorbing) states keep the labels 0 and 1 and are never stored as rows.

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace tuning {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr std::size_t kBoundaryCount = 2;
inline constexpr std::size_t kStateLabelOffset = 2;

struct ChainTolerances {
  double row_sum = 1e-9;
  /// Upper bound on the condition number of (I - P00). Beyond it the chain
  /// is treated as not absorbing with probability one.
  double max_condition = 1e12;
};

/// Embedded-chain transition probabilities in block form. The boundary rows
/// (zero block into internal states, identity among boundary states) are
/// implied and not stored.
class BlockTransitionMatrix {
 public:
  std::size_t n_internal() const noexcept { return static_cast<std::size_t>(p00_.rows()); }

  /// Internal -> internal block.
  const Matrix& p00() const noexcept { return p00_; }
  /// Internal -> boundary block, columns ordered [to 0, to 1].
  const Matrix& p01() const noexcept { return p01_; }

  friend BlockTransitionMatrix validate_chain(const Matrix& p00, const Matrix& p01,
                                              const ChainTolerances& tol);

 private:
  BlockTransitionMatrix(Matrix p00, Matrix p01) : p00_(std::move(p00)), p01_(std::move(p01)) {}

  Matrix p00_;
  Matrix p01_;
};

/// Checks shapes, entry ranges, row sums and absorption; throws tuning::Error
/// with DimensionMismatch, NonFiniteValue, NegativeEntry, RowSumViolation or
/// NotAbsorbing.
BlockTransitionMatrix validate_chain(const Matrix& p00, const Matrix& p01,
                                     const ChainTolerances& tol = {});

/// Expected visit counts m_ij before absorption, M = (I - P00)^-1.
class FundamentalMatrix {
 public:
  FundamentalMatrix() = default;
  explicit FundamentalMatrix(Matrix values) : values_(std::move(values)) {}

  const Matrix& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  Matrix values_;
};

/// Absorption probabilities, one row per internal state, columns [b_i0, b_i1].
class AbsorptionMatrix {
 public:
  AbsorptionMatrix() = default;
  explicit AbsorptionMatrix(Matrix values) : values_(std::move(values)) {}

  const Matrix& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  double to_zero(std::size_t i) const { return values_(static_cast<Eigen::Index>(i), 0); }
  double to_one(std::size_t i) const { return values_(static_cast<Eigen::Index>(i), 1); }

 private:
  Matrix values_;
};

/// Solves (I - P00) X = I column by column through an LU factorisation and
/// checks the residual. Throws SingularSystem if the solve is unusable.
FundamentalMatrix fundamental_matrix(const BlockTransitionMatrix& chain);

/// B = M * P01. Throws RowSumViolation if some row does not sum to one.
AbsorptionMatrix absorption_probabilities(const BlockTransitionMatrix& chain,
                                          const FundamentalMatrix& m,
                                          double row_sum_tol = 1e-9);

struct StabilityViolation {
  std::size_t state;     // internal index
  std::size_t boundary;  // 0 or 1
  double probability;
};

struct StabilityReport {
  std::vector<StabilityViolation> violations;

  bool stable() const noexcept { return violations.empty(); }
};

/// Every internal state must reach both boundaries with probability above
/// strict_tol; otherwise the boundary chain is reducible.
StabilityReport check_stability(const AbsorptionMatrix& b, double strict_tol = 0.0);

}  // namespace tuning
