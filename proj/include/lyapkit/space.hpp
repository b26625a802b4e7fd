#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "lyapkit/rat.hpp"

namespace lyap {

using Vec = std::vector<Rat>;
using Mat = std::vector<Vec>;  // row-major rational matrix

/// Finite metric space given extensionally by its distance table.
struct FiniteMetric {
  std::vector<std::vector<Rat>> dist;  // n x n

  std::size_t size() const { return dist.size(); }
  const Rat& d(std::size_t i, std::size_t j) const { return dist[i][j]; }

  /// Symmetry, zero exactly on the diagonal, triangle inequality.
  void validate() const;
};

struct EuclideanSpace {
  std::size_t dim = 0;
};

using StateSpace = std::variant<FiniteMetric, EuclideanSpace>;

bool is_finite(const StateSpace& sp);
std::size_t finite_size(const StateSpace& sp);
std::size_t euclidean_dim(const StateSpace& sp);

/// A state: an index into a finite space, or a rational vector.
using State = std::variant<std::size_t, Vec>;

bool state_in_space(const StateSpace& sp, const State& x);
bool states_equal(const State& a, const State& b);
std::string state_to_string(const State& x);

/// Exact distance; Euclidean distances are sqrt-of-rational values.
ExtVal distance(const StateSpace& sp, const State& a, const State& b);

/// Exact closed-ball membership test d(a, b) <= r (squared comparison on
/// Euclidean spaces, so no floating point is involved).
bool distance_leq(const StateSpace& sp, const State& a, const State& b,
                  const Rat& r);

/// Subset of a finite space.
struct FiniteSet {
  std::vector<bool> bits;

  explicit FiniteSet(std::size_t n = 0) : bits(n, false) {}
  static FiniteSet singleton(std::size_t n, std::size_t i);
  static FiniteSet full(std::size_t n);

  std::size_t universe() const { return bits.size(); }
  bool contains(std::size_t i) const { return bits[i]; }
  void insert(std::size_t i) { bits[i] = true; }
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  bool subset_of(const FiniteSet& other) const;
  FiniteSet united(const FiniteSet& other) const;
  std::vector<std::size_t> elements() const;

  bool operator==(const FiniteSet&) const = default;
};

/// Point cloud standing in for a region of a Euclidean space, tagged with a
/// note describing how it was sampled.
struct SampleSet {
  std::vector<Vec> points;
  std::string grid_note;
};

using StateSet = std::variant<FiniteSet, SampleSet>;

/// Closed ball as an explicit finite set.
FiniteSet finite_ball(const FiniteMetric& m, std::size_t center, const Rat& r);

/// Sorted distinct positive distances from a point; the default epsilon grid
/// on finite systems (every distinct closed ball around the point appears).
std::vector<Rat> distance_spectrum(const FiniteMetric& m, std::size_t center);

}  // namespace lyap
