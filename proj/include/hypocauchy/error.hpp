#pragma once

#include <stdexcept>
#include <string>

namespace hypocauchy {

enum class ErrorCode {
  InvalidArgument,
  OutOfDomain,
  Singular,
  FitFailed,
  UnsupportedFactor,
  CalibrationFailed,
  Config,
};

const char* to_string(ErrorCode code);

/// Exception carrying a machine-readable code; every library failure goes through it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hypocauchy
