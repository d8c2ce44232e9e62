#include "mdgs/common.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace mdgs {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidConfiguration: return "invalid-configuration";
    case ErrorKind::kInvalidValue: return "invalid-value";
    case ErrorKind::kDimensionMismatch: return "dimension-mismatch";
    case ErrorKind::kPenaltyTooSmall: return "penalty-too-small";
    case ErrorKind::kOperatorNotSpd: return "operator-not-spd";
    case ErrorKind::kDegradedEmbedding: return "degraded-embedding";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kInternal: return "internal";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

int configure_threads_from_env() {
  if (const char* env = std::getenv("MDGS_THREADS")) {
    char* end = nullptr;
    long value = std::strtol(env, &end, 10);
    if (end != env && value > 0) omp_set_num_threads(static_cast<int>(value));
  }
  return omp_get_max_threads();
}

}  // namespace mdgs
