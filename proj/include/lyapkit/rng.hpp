#pragma once

#include <cstdint>
#include <random>

#include "lyapkit/rat.hpp"

namespace lyap {

/// Uniform draw in [0, n) by modulo. std::uniform_int_distribution is not
/// pinned across standard libraries; reports must replay bit-identically
/// from a seed, so all sampling goes through this.
inline std::uint64_t rnd_below(std::mt19937_64& g, std::uint64_t n) {
  return g() % n;
}

/// Dyadic rational uniform on [-box, box] with 2^bits resolution.
inline Rat rnd_dyadic(std::mt19937_64& g, const Rat& box, unsigned bits = 10) {
  const std::int64_t span = std::int64_t(1) << bits;
  const std::int64_t k =
      static_cast<std::int64_t>(rnd_below(g, 2 * std::uint64_t(span) + 1)) -
      span;
  return box * k / span;
}

}  // namespace lyap
