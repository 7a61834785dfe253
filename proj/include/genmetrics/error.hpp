#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace genmetrics {

enum class ErrorCode {
  kBadMagic,
  kBadDtype,
  kTruncatedPayload,
  kTrailingBytes,
  kEmptySet,
  kNonFinite,
  kZeroNormRow,
  kNotNormalized,
  kIo,
  kDimensionMismatch,
  kTooFewSamples,
  kAsymmetric,
  kNotPsd,
  kNegativeFid,
  kInvalidConfig,
};

// Stable identifier printed on the diagnostic stream by the CLI.
std::string_view error_code_name(ErrorCode code);

/// Input or numerical validation failure. Everything the library rejects
/// because of the data it was given is reported through this type; anything
/// else escaping the library is an internal error.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace genmetrics
