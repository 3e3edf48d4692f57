#include "svmpool/error.hpp"

namespace svmpool {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyBag: return "EmptyBag";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kStateMismatch: return "StateMismatch";
    case ErrorCode::kOrderingMismatch: return "OrderingMismatch";
    case ErrorCode::kNegativeInput: return "NegativeInput";
    case ErrorCode::kMissingClass: return "MissingClass";
    case ErrorCode::kCountMismatch: return "CountMismatch";
    case ErrorCode::kNotPsd: return "NotPSD";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kEmptySource: return "EmptySource";
    case ErrorCode::kFormatVersionMismatch: return "FormatVersionMismatch";
    case ErrorCode::kCorruptFile: return "CorruptFile";
    case ErrorCode::kIoFailure: return "IoFailure";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kInvalidSpec:
      return ErrorCategory::kUsage;
    case ErrorCode::kNotPsd:
      return ErrorCategory::kNumerical;
    default:
      return ErrorCategory::kData;
  }
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace svmpool
