#include "hypocauchy/error.hpp"

namespace hypocauchy {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::OutOfDomain: return "OUT_OF_DOMAIN";
    case ErrorCode::Singular: return "SINGULAR";
    case ErrorCode::FitFailed: return "FIT_FAILED";
    case ErrorCode::UnsupportedFactor: return "UNSUPPORTED_FACTOR";
    case ErrorCode::CalibrationFailed: return "CALIBRATION_FAILED";
    case ErrorCode::Config: return "CONFIG";
  }
  return "UNKNOWN";
}

}  // namespace hypocauchy
