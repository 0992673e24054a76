#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tuning {

enum class ErrorCode {
  DimensionMismatch,
  RowSumViolation,
  NegativeEntry,
  NonFiniteValue,
  NotAbsorbing,
  SingularSystem,
  InvalidParameter,
  InvalidPolicy,
  UnstableModel,
  NonPositiveDenominatorCoefficient,
  MixedSignDenominator,
  ZeroDenominator,
  IndexOutOfRange,
  EmptyActionSet,
  NonconvergentCycle,
  InvalidInput,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map them onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tuning
