#include "monogenic/error.hpp"

namespace monogenic {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::NonRealOutput: return "NonRealOutput";
    case ErrorCode::NegativeScale: return "NegativeScale";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::BadThresholds: return "BadThresholds";
    case ErrorCode::OriginSingularity: return "OriginSingularity";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnreadableInput: return "UnreadableInput";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace monogenic
