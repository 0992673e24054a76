#include "tuning/chain.hpp"
#include "tuning/errors.hpp"
#include "tuning/simulator.hpp"

#include "support/oracles.hpp"
#include "support/random_models.hpp"

#include <doctest.h>

#include <string>

using namespace tuning;
using namespace tuning::testing;

namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected tuning::Error");
  return ErrorCode::InvalidInput;
}

}  // namespace

TEST_CASE("validate_chain accepts immediate absorption") {
  const auto chain = validate_chain(mat({{0.0}}), mat({{0.5, 0.5}}));
  CHECK(chain.n_internal() == 1);
  CHECK(chain.p01()(0, 1) == 0.5);
}

TEST_CASE("validate_chain reports the violating row and its sum") {
  try {
    validate_chain(mat({{0.5}}), mat({{0.25, 0.30}}));
    FAIL("expected RowSumViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RowSumViolation);
    const std::string msg = e.what();
    CHECK(msg.find("row 0") != std::string::npos);
    CHECK(msg.find("1.05") != std::string::npos);
  }
}

TEST_CASE("validate_chain rejects a state that never leaves itself") {
  CHECK(code_of([] { validate_chain(mat({{1.0}}), mat({{0.0, 0.0}})); }) ==
        ErrorCode::NotAbsorbing);
  // A closed internal class is just as non-absorbing.
  CHECK(code_of([] {
          validate_chain(mat({{0.0, 1.0}, {1.0, 0.0}}), mat({{0.0, 0.0}, {0.0, 0.0}}));
        }) == ErrorCode::NotAbsorbing);
}

TEST_CASE("validate_chain shape and sign errors") {
  CHECK(code_of([] { validate_chain(mat({{0.5, 0.0}}), mat({{0.25, 0.25}})); }) ==
        ErrorCode::DimensionMismatch);
  CHECK(code_of([] { validate_chain(mat({{0.5}}), mat({{0.5}})); }) ==
        ErrorCode::DimensionMismatch);
  CHECK(code_of([] { validate_chain(mat({{0.5}}), mat({{0.25, 0.25}, {0.25, 0.25}})); }) ==
        ErrorCode::DimensionMismatch);
  CHECK(code_of([] { validate_chain(mat({{-0.1}}), mat({{0.6, 0.5}})); }) ==
        ErrorCode::NegativeEntry);
  CHECK(code_of([] { validate_chain(mat({{std::nan("")}}), mat({{0.5, 0.5}})); }) ==
        ErrorCode::NonFiniteValue);
}

TEST_CASE("row-sum tolerance is configurable") {
  const Matrix p00 = mat({{0.5}});
  const Matrix p01 = mat({{0.25, 0.2500001}});
  CHECK(code_of([&] { validate_chain(p00, p01); }) == ErrorCode::RowSumViolation);
  ChainTolerances loose;
  loose.row_sum = 1e-6;
  CHECK_NOTHROW(validate_chain(p00, p01, loose));
}

TEST_CASE("fundamental matrix of a chain without internal transitions is the identity") {
  const auto chain = validate_chain(Matrix::Zero(3, 3), mat({{1, 0}, {0.5, 0.5}, {0, 1}}));
  const auto m = fundamental_matrix(chain);
  CHECK((m.values() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
  const auto b = absorption_probabilities(chain, m);
  CHECK((b.values() - chain.p01()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fundamental matrix agrees with truncated Neumann series") {
  SUBCASE("self-loop 0.5") {
    const auto chain = validate_chain(mat({{0.5}}), mat({{0.25, 0.25}}));
    const auto oracle = neumann_series(to_dense(chain.p00()), 60);
    CHECK(oracle[0][0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(std::abs(fundamental_matrix(chain)(0, 0) - oracle[0][0]) <= 1e-8);
    CHECK(fundamental_matrix(chain)(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("two states") {
    const auto chain =
        validate_chain(mat({{0.2, 0.3}, {0.1, 0.4}}), mat({{0.25, 0.25}, {0.25, 0.25}}));
    const auto oracle = neumann_series(to_dense(chain.p00()), 200);
    const auto m = fundamental_matrix(chain);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(m(i, j) - oracle[i][j]) <= 1e-8);
    // (I - P00)^-1 = [[0.6, 0.3], [0.1, 0.8]] / 0.45
    CHECK(m(0, 0) == doctest::Approx(0.6 / 0.45).epsilon(1e-14));
    CHECK(m(0, 1) == doctest::Approx(0.3 / 0.45).epsilon(1e-14));
  }
}

TEST_CASE("absorption probabilities of the half self-loop") {
  const auto chain = validate_chain(mat({{0.5}}), mat({{0.25, 0.25}}));
  const auto b = absorption_probabilities(chain, fundamental_matrix(chain));
  CHECK(b.to_zero(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(b.to_one(0) == doctest::Approx(0.5).epsilon(1e-15));

  const auto est = estimate_absorption(chain, 0, 1'000'000, 11);
  CHECK(std::abs(est.to_zero - 0.5) <= 0.002);
  CHECK(est.to_zero + est.to_one == 1.0);
}

TEST_CASE("absorption_probabilities rejects a mismatched fundamental matrix") {
  const auto chain = validate_chain(mat({{0.5}}), mat({{0.25, 0.25}}));
  CHECK(code_of([&] { absorption_probabilities(chain, FundamentalMatrix(Matrix::Identity(2, 2))); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("check_stability") {
  CHECK(check_stability(AbsorptionMatrix(mat({{0.5, 0.5}}))).stable());
  CHECK(check_stability(AbsorptionMatrix(mat({{0.9, 0.1}, {0.3, 0.7}}))).stable());

  const auto report = check_stability(AbsorptionMatrix(mat({{1.0, 0.0}})));
  REQUIRE_FALSE(report.stable());
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].state == 0);
  CHECK(report.violations[0].boundary == 1);
  CHECK(report.violations[0].probability == 0.0);

  // A stricter threshold flags small but positive probabilities.
  CHECK_FALSE(check_stability(AbsorptionMatrix(mat({{0.99, 0.01}})), 0.05).stable());
}

TEST_CASE("random chains: Neumann equivalence, row sums, monotonicity") {
  Rng rng(20261015);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = random_size(rng, 1, 8);
    const auto raw = random_chain(rng, n);
    const auto chain = validate_chain(raw.p00, raw.p01);
    const auto m = fundamental_matrix(chain);
    const auto b = absorption_probabilities(chain, m);

    const Dense p = to_dense(raw.p00);
    const double norm = inf_norm(p);
    REQUIRE(norm < 1.0);
    const auto oracle = neumann_series(p, neumann_terms(norm, 1e-10));
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(m(i, i) >= 1.0);
      CHECK(std::abs(b.values().row(static_cast<Eigen::Index>(i)).sum() - 1.0) <= 1e-9);
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(std::abs(m(i, j) - oracle[i][j]) <= 1e-8);
        const double partial = (i == j ? 1.0 : 0.0) + p[i][j];
        CHECK(m(i, j) >= partial - 1e-12);
      }
    }
    const Matrix residual = m.values() * (Matrix::Identity(static_cast<Eigen::Index>(n),
                                                           static_cast<Eigen::Index>(n)) -
                                          raw.p00) -
                            Matrix::Identity(static_cast<Eigen::Index>(n),
                                             static_cast<Eigen::Index>(n));
    CHECK(residual.cwiseAbs().maxCoeff() <= 1e-8);
  }
}
