#pragma once

#include <cstddef>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace synchro {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of different dimension, or an index outside [0, n).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An input violates the precondition of an operation.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A search bound (BFS frontier, letter count, rejection budget) ran out
/// before the answer was known. The result is indeterminate, not negative.
class CapExhausted : public Error {
 public:
  using Error::Error;
};

inline constexpr std::size_t kDefaultMaxDimension = 4096;

/// Dimension cap for every matrix and automaton; SYNCHRO_MAX_N overrides it.
inline std::size_t max_dimension() {
  static const std::size_t cap = [] {
    if (const char* env = std::getenv("SYNCHRO_MAX_N"); env != nullptr) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) {
        return static_cast<std::size_t>(v);
      }
    }
    return kDefaultMaxDimension;
  }();
  return cap;
}

inline void check_dimension(std::size_t n) {
  if (n == 0 || n > max_dimension()) {
    throw DimensionError("dimension " + std::to_string(n) +
                         " outside [1, " + std::to_string(max_dimension()) +
                         "]");
  }
}

}  // namespace synchro
