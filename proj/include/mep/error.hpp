#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mep {

enum class ErrorKind {
  DimensionMismatch,
  NonFinite,
  InvalidArgument,
  Divergence,
  Disconnected,
  Io,
};

const char* to_string(ErrorKind kind);

/// Structured error raised by every module. `step` is set for failures that
/// happen inside an iterative procedure (training step, NEB iteration).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> step = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> step() const noexcept { return step_; }

  /// Numerical failures map to a different CLI exit code than usage errors.
  bool is_numerical() const noexcept {
    return kind_ == ErrorKind::NonFinite || kind_ == ErrorKind::Divergence;
  }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> step_;
};

}  // namespace mep
