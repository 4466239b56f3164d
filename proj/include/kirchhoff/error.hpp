#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kirchhoff {

enum class ErrorKind {
  InvalidArgument,
  NonFinite,
  HorizonReached,
  BracketInvalid,
  NoConvergence,
  WindowTooNoisy,
  InvariantViolated,
  GridMismatch,
  IterationLimit,
  NearSingular,
  Inconclusive,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` tells callers which
/// contract was broken.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kirchhoff
