#include "lyapkit/space.hpp"

#include <algorithm>
#include <sstream>

#include "lyapkit/errors.hpp"

namespace lyap {

void FiniteMetric::validate() const {
  const std::size_t n = dist.size();
  if (n == 0) throw ValidationError("finite metric needs at least one state");
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i].size() != n) {
      throw ValidationError("distance table is not square");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (dist[i][j] < 0) throw ValidationError("negative distance entry");
      if (dist[i][j] != dist[j][i]) {
        throw ValidationError("distance table is not symmetric");
      }
      if ((i == j) != (dist[i][j] == 0)) {
        throw ValidationError(
            "distance must be zero exactly on the diagonal (entry " +
            std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (dist[i][k] > dist[i][j] + dist[j][k]) {
          throw ValidationError("triangle inequality violated at (" +
                                std::to_string(i) + "," + std::to_string(j) +
                                "," + std::to_string(k) + ")");
        }
      }
    }
  }
}

bool is_finite(const StateSpace& sp) {
  return std::holds_alternative<FiniteMetric>(sp);
}

std::size_t finite_size(const StateSpace& sp) {
  return std::get<FiniteMetric>(sp).size();
}

std::size_t euclidean_dim(const StateSpace& sp) {
  return std::get<EuclideanSpace>(sp).dim;
}

bool state_in_space(const StateSpace& sp, const State& x) {
  if (const auto* m = std::get_if<FiniteMetric>(&sp)) {
    const auto* i = std::get_if<std::size_t>(&x);
    return i && *i < m->size();
  }
  const auto* v = std::get_if<Vec>(&x);
  return v && v->size() == euclidean_dim(sp);
}

bool states_equal(const State& a, const State& b) { return a == b; }

std::string state_to_string(const State& x) {
  if (const auto* i = std::get_if<std::size_t>(&x)) return std::to_string(*i);
  const Vec& v = std::get<Vec>(x);
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) os << ", ";
    os << v[k];
  }
  os << ")";
  return os.str();
}

namespace {

Rat squared_euclidean(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) {
    throw ValidationError("dimension mismatch in distance");
  }
  Rat acc(0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    Rat d = a[k] - b[k];
    acc += d * d;
  }
  return acc;
}

}  // namespace

ExtVal distance(const StateSpace& sp, const State& a, const State& b) {
  if (const auto* m = std::get_if<FiniteMetric>(&sp)) {
    return ExtVal::finite(m->d(std::get<std::size_t>(a),
                               std::get<std::size_t>(b)));
  }
  Rat sq = squared_euclidean(std::get<Vec>(a), std::get<Vec>(b));
  return ExtVal::sqrt_of(std::move(sq));
}

bool distance_leq(const StateSpace& sp, const State& a, const State& b,
                  const Rat& r) {
  if (r < 0) return false;
  if (const auto* m = std::get_if<FiniteMetric>(&sp)) {
    return m->d(std::get<std::size_t>(a), std::get<std::size_t>(b)) <= r;
  }
  return squared_euclidean(std::get<Vec>(a), std::get<Vec>(b)) <= r * r;
}

FiniteSet FiniteSet::singleton(std::size_t n, std::size_t i) {
  FiniteSet s(n);
  s.insert(i);
  return s;
}

FiniteSet FiniteSet::full(std::size_t n) {
  FiniteSet s(n);
  s.bits.assign(n, true);
  return s;
}

std::size_t FiniteSet::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), true));
}

bool FiniteSet::subset_of(const FiniteSet& other) const {
  if (universe() != other.universe()) {
    throw ValidationError("subset test over different universes");
  }
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] && !other.bits[i]) return false;
  }
  return true;
}

FiniteSet FiniteSet::united(const FiniteSet& other) const {
  if (universe() != other.universe()) {
    throw ValidationError("union over different universes");
  }
  FiniteSet out(universe());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    out.bits[i] = bits[i] || other.bits[i];
  }
  return out;
}

std::vector<std::size_t> FiniteSet::elements() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out.push_back(i);
  }
  return out;
}

FiniteSet finite_ball(const FiniteMetric& m, std::size_t center, const Rat& r) {
  FiniteSet s(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.d(center, i) <= r) s.insert(i);
  }
  return s;
}

std::vector<Rat> distance_spectrum(const FiniteMetric& m, std::size_t center) {
  std::vector<Rat> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i == center) continue;
    out.push_back(m.d(center, i));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace lyap
