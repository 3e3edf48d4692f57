#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace svmpool {

enum class ErrorCode {
  kInvalidConfig,
  kDimensionMismatch,
  kEmptyBag,
  kNonFiniteInput,
  kStateMismatch,
  kOrderingMismatch,
  kNegativeInput,
  kMissingClass,
  kCountMismatch,
  kNotPsd,
  kEmptyDataset,
  kInvalidSpec,
  kEmptySource,
  kFormatVersionMismatch,
  kCorruptFile,
  kIoFailure,
};

// Coarse grouping used for process exit codes.
enum class ErrorCategory { kUsage, kData, kNumerical };

std::string_view error_code_name(ErrorCode code);
ErrorCategory error_category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace svmpool
