#include "mlmq/error.hpp"

namespace mlmq {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "parse_error";
    case ErrorKind::kNegativeWeight: return "negative_weight";
    case ErrorKind::kVertexOutOfRange: return "vertex_out_of_range";
    case ErrorKind::kInvalidParameter: return "invalid_parameter";
    case ErrorKind::kInvalidSource: return "invalid_source";
    case ErrorKind::kQueueOverflow: return "queue_overflow";
    case ErrorKind::kPrecondition: return "precondition_violation";
    case ErrorKind::kInsufficientData: return "insufficient_data";
    case ErrorKind::kWatchdog: return "watchdog_timeout";
    case ErrorKind::kIo: return "io_error";
  }
  return "unknown";
}

}  // namespace mlmq
