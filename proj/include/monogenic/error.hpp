#pragma once

#include <stdexcept>
#include <string>

namespace monogenic {

enum class ErrorCode {
  ZeroNorm,
  NonRealOutput,
  NegativeScale,
  ImageTooSmall,
  BadThresholds,
  OriginSingularity,
  InvalidArgument,
  UnreadableInput,
  UnsupportedFormat,
  IoFailure,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace monogenic
