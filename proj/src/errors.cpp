#include "wsnlife/errors.hpp"

namespace wsn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::unsorted_positions: return "UnsortedPositions";
    case ErrorCode::non_positive_range: return "NonPositiveRange";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::too_large: return "TooLarge";
    case ErrorCode::timeout: return "Timeout";
    case ErrorCode::infeasible_solution: return "InfeasibleSolution";
    case ErrorCode::numerical_failure: return "NumericalFailure";
    case ErrorCode::capacity_violation: return "CapacityViolation";
    case ErrorCode::rejection_exhausted: return "RejectionExhausted";
    case ErrorCode::invalid_input: return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace wsn
