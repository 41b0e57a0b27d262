#include "rcxi/error.hpp"

namespace rcxi {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::non_finite: return "non-finite";
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::format: return "format";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace rcxi
