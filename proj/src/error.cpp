#include "mep/error.hpp"

#include "mep/types.hpp"

namespace mep {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::NonFinite: return "non-finite value";
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::Disconnected: return "disconnected graph";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

namespace {

std::string format_message(ErrorKind kind, const std::string& message, std::optional<std::size_t> step) {
  std::string out = std::string(to_string(kind)) + ": " + message;
  if (step) out += " (step " + std::to_string(*step) + ")";
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> step)
    : std::runtime_error(format_message(kind, message, step)), kind_(kind), step_(step) {}

bool all_finite(const ParamVector& v) { return v.allFinite(); }

}  // namespace mep
