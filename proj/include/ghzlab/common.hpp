#pragma once

#include <stdexcept>
#include <string>

namespace ghzlab {

// Raised when caller-supplied input violates a documented precondition.
// The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an internal invariant fails. The CLI maps this to exit code 1.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

inline void internal_check(bool condition, const std::string& message) {
  if (!condition) throw InternalError(message);
}

// Execution policy for the data-parallel kernels (sweep sampling, experiment
// rounds). Serial is the reference path; Parallel uses OpenMP when compiled
// in and must produce bit-identical results.
enum class ExecPolicy { Serial, Parallel };

}  // namespace ghzlab
