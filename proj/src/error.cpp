#include "kirchhoff/error.hpp"

namespace kirchhoff {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::HorizonReached: return "HorizonReached";
    case ErrorKind::BracketInvalid: return "BracketInvalid";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::WindowTooNoisy: return "WindowTooNoisy";
    case ErrorKind::InvariantViolated: return "InvariantViolated";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::IterationLimit: return "IterationLimit";
    case ErrorKind::NearSingular: return "NearSingular";
    case ErrorKind::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

}  // namespace kirchhoff
