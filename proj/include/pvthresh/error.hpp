#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pvthresh {

enum class ErrorCode {
  invalid_argument,
  invalid_df,
  invalid_probability,
  invalid_model,
  invalid_config,
  empty_range,
  overlapping_ranges,
  non_integer_count,
  empty_data,
  empty_series,
  empty_file,
  parse_error,
  non_numeric,
  io_error,
  unbalanced_design,
  too_few_replicates,
  domain_error,
  degenerate_variance,
  estimation_failure,
  subsample_failure,
};

// Process exit status families shared by every CLI command.
enum class ErrorCategory { usage = 2, data = 3, numeric = 4 };

std::string_view error_code_name(ErrorCode code);
ErrorCategory error_category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view code_name() const { return error_code_name(code_); }
  int exit_status() const { return static_cast<int>(error_category(code_)); }

 private:
  ErrorCode code_;
};

}  // namespace pvthresh
