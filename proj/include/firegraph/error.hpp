#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace firegraph {

enum class ErrorCode {
  invalid_argument,
  parse_error,
  resource_limit,
  protection_overlap,
  budget_exceeded,
  non_monotone_budget,
  partition_infeasible,
  hypothesis_violation,
  scan_cap_exceeded,
  source_failure,
  check_failed,
  not_found,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `detail` carries machine-readable
/// context (an offending index, vertex keys) for the CLI and HTTP layers.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::vector<std::string> detail = {})
      : std::runtime_error(std::move(message)), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::vector<std::string>& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::vector<std::string> detail_;
};

}  // namespace firegraph
