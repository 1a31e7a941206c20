#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace keydyn {

enum class ErrorCode {
  malformed_session,
  malformed_payload,
  mismatched_subject_or_session,
  bad_header,
  bad_row,
  duplicate_key,
  empty_group,
  missing_class,
  dimension_mismatch,
  singular_covariance,
  diverged,
  too_few_subjects,
  one_class_only,
  overlapping_subjects,
  unknown_algorithm,
  empty_store,
  io_error,
  invalid_argument,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace keydyn
