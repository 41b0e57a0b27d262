#pragma once

#include <stdexcept>
#include <string>

namespace rcxi {

enum class ErrorCode {
  invalid_parameter,
  dimension_mismatch,
  non_finite,
  invalid_input,
  degenerate,
  format,
  io,
};

const char* to_string(ErrorCode code);

// All library failures are reported with this exception. `field()` names the
// offending parameter, record field or path when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string field, const std::string& message)
      : std::runtime_error(message), code_(code), field_(std::move(field)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

}  // namespace rcxi
