#pragma once

#include <stdexcept>
#include <string>

namespace descort {

enum class Errc {
  InvalidArgument,
  NonNormalized,
  DivergentMap,
  TransformFailed,
  NotInvertible,
  DivergentMoment,
  Divergent,
  Unsupported,
  InvalidBeta,
  CompactSupport,
  PoorFit,
  Schema,
};

const char* to_string(Errc code);

/// Every failure raised by the library carries one of the Errc codes so the
/// CLI can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace descort
