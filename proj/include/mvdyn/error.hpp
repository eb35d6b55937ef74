#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mvdyn {

enum class ErrorCode {
  malformed_element,
  algebra_mismatch,
  dimension_mismatch,
  invariant_violation,
  not_surjective,
  not_an_intertwiner,
  non_invertible_pivot,
  numerically_indeterminate,
  not_square,
  not_right_invertible,
  not_invertible,
  trivial_center_required,
  commutative_required,
  search_budget_exceeded,
  dimension_budget_exceeded,
  unverified_certificate,
  schema_error,
  io_error,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::malformed_element: return "MalformedElement";
    case ErrorCode::algebra_mismatch: return "AlgebraMismatch";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::invariant_violation: return "InvariantViolation";
    case ErrorCode::not_surjective: return "NotSurjective";
    case ErrorCode::not_an_intertwiner: return "NotAnIntertwiner";
    case ErrorCode::non_invertible_pivot: return "NonInvertiblePivot";
    case ErrorCode::numerically_indeterminate: return "NumericallyIndeterminate";
    case ErrorCode::not_square: return "NotSquare";
    case ErrorCode::not_right_invertible: return "NotRightInvertible";
    case ErrorCode::not_invertible: return "NotInvertible";
    case ErrorCode::trivial_center_required: return "TrivialCenterRequired";
    case ErrorCode::commutative_required: return "CommutativeRequired";
    case ErrorCode::search_budget_exceeded: return "SearchBudgetExceeded";
    case ErrorCode::dimension_budget_exceeded: return "DimensionBudgetExceeded";
    case ErrorCode::unverified_certificate: return "UnverifiedCertificate";
    case ErrorCode::schema_error: return "SchemaError";
    case ErrorCode::io_error: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch without string matching.
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

}  // namespace mvdyn
