#include "keydyn/error.hpp"

namespace keydyn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::malformed_session: return "malformed_session";
    case ErrorCode::malformed_payload: return "malformed_payload";
    case ErrorCode::mismatched_subject_or_session: return "mismatched_subject_or_session";
    case ErrorCode::bad_header: return "bad_header";
    case ErrorCode::bad_row: return "bad_row";
    case ErrorCode::duplicate_key: return "duplicate_key";
    case ErrorCode::empty_group: return "empty_group";
    case ErrorCode::missing_class: return "missing_class";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::singular_covariance: return "singular_covariance";
    case ErrorCode::diverged: return "diverged";
    case ErrorCode::too_few_subjects: return "too_few_subjects";
    case ErrorCode::one_class_only: return "one_class_only";
    case ErrorCode::overlapping_subjects: return "overlapping_subjects";
    case ErrorCode::unknown_algorithm: return "unknown_algorithm";
    case ErrorCode::empty_store: return "empty_store";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::invalid_argument: return "invalid_argument";
  }
  return "unknown";
}

}  // namespace keydyn
