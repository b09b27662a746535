#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cdis {

enum class ErrorCode {
  InvalidArgument,
  InvalidEdge,
  InvalidSize,
  InvalidCoupling,
  InconsistentParams,
  ConvergenceFailure,
  SingularResolvent,
  SingularMatrix,
  MissingElement,
  LengthMismatch,
  NonMonotonicGrid,
  PeakNotFound,
  UnresolvedWidth,
  MissingDipole,
  ConfigParse,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code. Every failure raised by the
/// library is one of these; the CLI maps codes to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace cdis
