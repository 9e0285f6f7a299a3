#pragma once

#include <stdexcept>
#include <string>

namespace dynauct {

/// Invalid inputs: out-of-range parameters, non-normalized probabilities,
/// unordered supports, preconditions not met.
class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Instance exceeds a configured cap (history count, LP nonzeros, scan range).
class size_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Tolerance or convergence failure: quadrature that will not converge,
/// divergent integrals, solver iteration caps.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File or configuration problems: malformed JSON, unknown keys, unreadable paths.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dynauct
