#include "tuning/errors.hpp"

namespace tuning {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RowSumViolation: return "RowSumViolation";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NotAbsorbing: return "NotAbsorbing";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::InvalidPolicy: return "InvalidPolicy";
    case ErrorCode::UnstableModel: return "UnstableModel";
    case ErrorCode::NonPositiveDenominatorCoefficient: return "NonPositiveDenominatorCoefficient";
    case ErrorCode::MixedSignDenominator: return "MixedSignDenominator";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyActionSet: return "EmptyActionSet";
    case ErrorCode::NonconvergentCycle: return "NonconvergentCycle";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace tuning
