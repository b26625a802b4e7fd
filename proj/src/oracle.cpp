#include "lyapkit/oracle.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "lyapkit/certificates.hpp"
#include "lyapkit/errors.hpp"

namespace lyap {

void FiniteInstance::validate() const {
  const std::size_t n = dist.size();
  if (n == 0 || n > 64) throw ValidationError("instance needs 1..64 states");
  if (letter_maps.empty() || letter_maps.size() > 3)
    throw ValidationError("instance needs 1..3 letters");
  for (const auto& row : dist)
    if (row.size() != n) throw ValidationError("distance table not square");
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i][i] != 0) throw ValidationError("nonzero self-distance");
    for (std::size_t j = 0; j < n; ++j) {
      if (dist[i][j] != dist[j][i])
        throw ValidationError("asymmetric distance table");
      if (i != j && dist[i][j] <= 0)
        throw ValidationError("nonpositive distance between distinct states");
      for (std::size_t k = 0; k < n; ++k)
        if (dist[i][k] > dist[i][j] + dist[j][k])
          throw ValidationError("triangle inequality violated");
    }
  }
  for (const auto& m : letter_maps) {
    if (m.size() != n) throw ValidationError("letter map not total");
    for (std::size_t s : m)
      if (s >= n) throw ValidationError("letter map leaves the state set");
  }
}

DynamicalSystem FiniteInstance::to_system() const {
  DynamicalSystem sys;
  sys.space = FiniteMetric{dist};
  sys.timeline = letters() == 1
                     ? Timeline{TimelineKind::DiscreteLinear, 0}
                     : Timeline{TimelineKind::FreeMonoid,
                                static_cast<unsigned>(letters())};
  sys.generators = FiniteMaps{letter_maps};
  sys.validate();
  return sys;
}

std::uint64_t brute_reach(const FiniteInstance& inst, std::uint64_t start) {
  const std::size_t n = inst.states();
  std::uint64_t mask = start;
  for (;;) {
    std::uint64_t next = mask;
    for (const auto& m : inst.letter_maps)
      for (std::size_t s = 0; s < n; ++s)
        if (mask >> s & 1u) next |= std::uint64_t{1} << m[s];
    if (next == mask) return mask;
    mask = next;
  }
}

std::uint64_t brute_ball(const FiniteInstance& inst, std::size_t center,
                         const Rat& radius) {
  std::uint64_t mask = 0;
  for (std::size_t s = 0; s < inst.states(); ++s)
    if (inst.dist[center][s] <= radius) mask |= std::uint64_t{1} << s;
  return mask;
}

namespace {

// Distinct positive distances from x*, ascending, preceded by a radius
// small enough that its ball is the singleton. A one-state instance has no
// positive distances; any radius works there.
std::vector<Rat> candidate_radii(const FiniteInstance& inst,
                                 std::size_t x_star) {
  std::set<Rat> seen(inst.dist[x_star].begin(), inst.dist[x_star].end());
  seen.erase(Rat(0));
  std::vector<Rat> out;
  if (seen.empty()) {
    out.push_back(Rat(1));
    return out;
  }
  out.push_back(*seen.begin() / 2);
  out.insert(out.end(), seen.begin(), seen.end());
  return out;
}

bool subset(std::uint64_t a, std::uint64_t b) { return (a & ~b) == 0; }

}  // namespace

std::optional<Rat> brute_delta_exists(const FiniteInstance& inst,
                                      std::size_t x_star, const Rat& eps) {
  const std::uint64_t target = brute_ball(inst, x_star, eps);
  const std::vector<Rat> cands = candidate_radii(inst, x_star);
  for (auto it = cands.rbegin(); it != cands.rend(); ++it)
    if (subset(brute_reach(inst, brute_ball(inst, x_star, *it)), target))
      return *it;
  return std::nullopt;
}

namespace {

// Strictly increasing interpolant through (grid[i], value[i]) after
// shaving ties downward; shrinking a delta radius only shrinks the checked
// ball, so the certificate stays valid. Anchored at zero infimum.
PiecewiseLinearFn delta_interpolant(const std::vector<Rat>& grid,
                                    std::vector<Rat> value) {
  for (std::size_t i = value.size() - 1; i-- > 0;)
    if (value[i] >= value[i + 1]) value[i] = value[i + 1] * Rat(1023, 1024);
  Rat left = value.front() / grid.front();
  Rat right = grid.size() > 1
                  ? (value.back() - value[value.size() - 2]) /
                        (grid.back() - grid[grid.size() - 2])
                  : left;
  return PiecewiseLinearFn(grid, value, left, right);
}

std::string state_name(const FiniteInstance& inst, std::size_t s) {
  std::ostringstream os;
  os << "state " << s << " of " << inst.states();
  return os.str();
}

}  // namespace

BruteReport brute_check_theorems(const FiniteInstance& inst) {
  inst.validate();
  BruteReport rep;
  const DynamicalSystem sys = inst.to_system();
  for (std::size_t x = 0; x < inst.states(); ++x) {
    const std::vector<Rat> grid = candidate_radii(inst, x);
    std::vector<Rat> deltas;
    bool all = true;
    for (const Rat& eps : grid) {
      auto d = brute_delta_exists(inst, x, eps);
      if (!d) {
        all = false;
        break;
      }
      deltas.push_back(*d);
    }
    if (!all) continue;
    ++rep.equilibria_found;

    // Stability at every scale pins the point: it must not move.
    if (brute_reach(inst, std::uint64_t{1} << x) != std::uint64_t{1} << x) {
      rep.ok = false;
      rep.counterexamples.push_back(
          state_name(inst, x) +
          ": delta exists at every scale yet the state is not fixed");
      continue;
    }

    DeltaCertificate dc{State{x}, delta_interpolant(grid, deltas), grid,
                        Scope::exact()};
    Verdict vd = verify_delta(sys, dc);
    if (!vd.proved()) {
      rep.ok = false;
      rep.counterexamples.push_back(state_name(inst, x) +
                                    ": brute-force delta rejected by the "
                                    "engine: " +
                                    vd.detail);
      continue;
    }

    LyapunovCertificate lc = converse_construct(sys, dc);
    Verdict vl = verify_lyapunov(sys, lc);
    if (!vl.proved()) {
      rep.ok = false;
      rep.counterexamples.push_back(
          state_name(inst, x) +
          ": converse-constructed certificate fails: " + vl.detail);
      continue;
    }

    Verdict vr = verify_delta(sys, delta_from_lyapunov(lc));
    if (!vr.proved()) {
      rep.ok = false;
      rep.counterexamples.push_back(
          state_name(inst, x) +
          ": delta recovered from the Lyapunov certificate fails: " +
          vr.detail);
    }
  }
  return rep;
}

}  // namespace lyap
