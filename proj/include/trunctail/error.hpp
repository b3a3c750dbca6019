#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trunctail {

enum class ErrorCode {
  InvalidArgument,
  OutOfRange,
  NoRoot,
  NonConvergence,
  TiedExtremes,
  InvalidOdds,
  InfiniteEndpoint,
  DegenerateMoments,
  ZeroHill,
  DegenerateE,
  NonpositiveDelta,
  NoCandidate,
  ParseError,
  IoError,
  ConfigError,
};

/// Stable snake_case name used in status columns and error messages.
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace trunctail
