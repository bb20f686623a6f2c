#include "pvthresh/error.hpp"

namespace pvthresh {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::invalid_df: return "invalid-df";
    case ErrorCode::invalid_probability: return "invalid-p";
    case ErrorCode::invalid_model: return "invalid-model";
    case ErrorCode::invalid_config: return "invalid-config";
    case ErrorCode::empty_range: return "empty-range";
    case ErrorCode::overlapping_ranges: return "overlapping-ranges";
    case ErrorCode::non_integer_count: return "non-integer-count";
    case ErrorCode::empty_data: return "empty-data";
    case ErrorCode::empty_series: return "empty-series";
    case ErrorCode::empty_file: return "empty-file";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::non_numeric: return "non-numeric";
    case ErrorCode::io_error: return "io-error";
    case ErrorCode::unbalanced_design: return "unbalanced-design";
    case ErrorCode::too_few_replicates: return "too-few-replicates";
    case ErrorCode::domain_error: return "domain-error";
    case ErrorCode::degenerate_variance: return "degenerate-variance";
    case ErrorCode::estimation_failure: return "estimation-failure";
    case ErrorCode::subsample_failure: return "subsample-failure";
  }
  return "unknown";
}

ErrorCategory error_category(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::invalid_df:
    case ErrorCode::invalid_probability:
    case ErrorCode::invalid_model:
    case ErrorCode::invalid_config:
    case ErrorCode::empty_range:
    case ErrorCode::overlapping_ranges:
    case ErrorCode::non_integer_count:
      return ErrorCategory::usage;
    case ErrorCode::empty_data:
    case ErrorCode::empty_series:
    case ErrorCode::empty_file:
    case ErrorCode::parse_error:
    case ErrorCode::non_numeric:
    case ErrorCode::io_error:
    case ErrorCode::unbalanced_design:
    case ErrorCode::too_few_replicates:
    case ErrorCode::domain_error:
      return ErrorCategory::data;
    case ErrorCode::degenerate_variance:
    case ErrorCode::estimation_failure:
    case ErrorCode::subsample_failure:
      return ErrorCategory::numeric;
  }
  return ErrorCategory::numeric;
}

}  // namespace pvthresh
