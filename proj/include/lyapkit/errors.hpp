#pragma once

#include <stdexcept>
#include <string>

namespace lyap {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operands of a timeline operation belong to different timeline kinds.
struct KindMismatchError : Error {
  using Error::Error;
};

/// difference(a, b) requested with !leq(a, b).
struct NotComparableError : Error {
  using Error::Error;
};

/// Inverse requested for a comparison function that is not a bijection of
/// the positive reals (bounded image or positive infimum).
struct NotInvertibleError : Error {
  using Error::Error;
};

/// Discrete Lyapunov series diverges (spectral radius >= 1).
struct NonConvergentError : Error {
  using Error::Error;
};

/// Exact reachability requested on a non-finite state space.
struct UnsupportedExactReachError : Error {
  using Error::Error;
};

/// Input data violates a declared invariant (metric axioms, arity, ...).
struct ValidationError : Error {
  using Error::Error;
};

/// Description / certificate file syntax error with source position.
struct ParseError : Error {
  ParseError(const std::string& what, int line, int col)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(col) + ")"),
        line(line),
        col(col) {}
  int line;
  int col;
};

}  // namespace lyap
