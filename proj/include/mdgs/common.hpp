#pragma once

#include <stdexcept>
#include <string>

namespace mdgs {

enum class ErrorKind {
  kInvalidConfiguration,
  kInvalidValue,
  kDimensionMismatch,
  kPenaltyTooSmall,
  kOperatorNotSpd,
  kDegradedEmbedding,
  kIo,
  kInternal,
};

const char* to_string(ErrorKind kind);

/// Library error. Every failure path throws this with a kind the CLI maps
/// onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

/// Caps the OpenMP team size from MDGS_THREADS when set. Returns the limit in
/// effect afterwards.
int configure_threads_from_env();

}  // namespace mdgs
