#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bpm {

// Text could not be parsed; `offset` is the byte position of the failure.
struct parse_error : std::runtime_error {
  parse_error(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg), offset(offset) {}
  std::size_t offset;
};

// Evaluation hit a domain error (log of non-positive, division by zero)
// or produced a non-finite value. `component` is the map component index
// (0-based) when known, -1 otherwise.
struct eval_error : std::runtime_error {
  explicit eval_error(const std::string& msg, int component = -1)
      : std::runtime_error(msg), component(component) {}
  int component;
};

struct dimension_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A documented operation precondition does not hold (e.g. bisection
// without a sign change, anchor not interior to the domain).
struct precondition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct unsupported_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bpm
