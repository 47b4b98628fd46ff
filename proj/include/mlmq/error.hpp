#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mlmq {

enum class ErrorKind {
  kParse,
  kNegativeWeight,
  kVertexOutOfRange,
  kInvalidParameter,
  kInvalidSource,
  kQueueOverflow,
  kPrecondition,
  kInsufficientData,
  kWatchdog,
  kIo,
};

std::string_view to_string(ErrorKind kind);

// Every module reports failures through this one exception type; the CLI maps
// kind() onto its machine-readable error JSON.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mlmq
