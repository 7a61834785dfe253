#include "genmetrics/error.hpp"

namespace genmetrics {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadMagic: return "bad_magic";
    case ErrorCode::kBadDtype: return "bad_dtype";
    case ErrorCode::kTruncatedPayload: return "truncated_payload";
    case ErrorCode::kTrailingBytes: return "trailing_bytes";
    case ErrorCode::kEmptySet: return "empty_set";
    case ErrorCode::kNonFinite: return "non_finite";
    case ErrorCode::kZeroNormRow: return "zero_norm_row";
    case ErrorCode::kNotNormalized: return "not_normalized";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kTooFewSamples: return "too_few_samples";
    case ErrorCode::kAsymmetric: return "asymmetric_matrix";
    case ErrorCode::kNotPsd: return "not_psd";
    case ErrorCode::kNegativeFid: return "negative_fid";
    case ErrorCode::kInvalidConfig: return "invalid_config";
  }
  return "unknown";
}

}  // namespace genmetrics
