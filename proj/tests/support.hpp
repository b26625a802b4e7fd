#pragma once

// Shared generators for the randomized corpora: shortest-path metrics over
// random weighted graphs, map families biased toward contraction onto state
// 0, and certificate builders that work from brute-force scans so the engine
// under test never certifies itself.

#include <random>
#include <vector>

#include "lyapkit/certificates.hpp"
#include "lyapkit/oracle.hpp"
#include "lyapkit/rng.hpp"

namespace testsupport {
using namespace lyap;

inline std::vector<std::vector<Rat>> random_metric(std::mt19937_64& g,
                                                   std::size_t n) {
  std::vector<std::vector<long>> w(n, std::vector<long>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      w[i][j] = w[j][i] = 1 + static_cast<long>(rnd_below(g, 9));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && w[i][k] + w[k][j] < w[i][j]) w[i][j] = w[i][k] + w[k][j];
  std::vector<std::vector<Rat>> d(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i][j] = Rat(w[i][j]);
  return d;
}

/// Random instance with 2..max_states states and 1..3 letters. With
/// pin_zero, every letter fixes state 0 and mostly moves states closer to
/// it, so state 0 tends to be a Lyapunov equilibrium.
inline FiniteInstance random_instance(std::mt19937_64& g,
                                      std::size_t max_states, bool pin_zero) {
  FiniteInstance inst;
  const std::size_t n = 2 + rnd_below(g, max_states - 1);
  inst.dist = random_metric(g, n);
  const std::size_t letters = 1 + rnd_below(g, 3);
  for (std::size_t l = 0; l < letters; ++l) {
    std::vector<std::size_t> m(n);
    for (std::size_t s = 0; s < n; ++s) {
      if (pin_zero && s == 0) {
        m[s] = 0;
      } else if (pin_zero && rnd_below(g, 4) < 3) {
        std::vector<std::size_t> closer;
        for (std::size_t u = 0; u < n; ++u)
          if (inst.dist[0][u] < inst.dist[0][s]) closer.push_back(u);
        m[s] = closer[rnd_below(g, closer.size())];
      } else {
        m[s] = rnd_below(g, n);
      }
    }
    inst.letter_maps.push_back(std::move(m));
  }
  return inst;
}

/// Strictly increasing interpolant through (grid[i], vals[i]); ties are
/// shaved downward, which only shrinks the certified radii.
inline PiecewiseLinearFn strict_interpolant(const std::vector<Rat>& grid,
                                            std::vector<Rat> vals) {
  for (std::size_t i = vals.size() - 1; i-- > 0;)
    if (vals[i] >= vals[i + 1]) vals[i] = vals[i + 1] * Rat(1023, 1024);
  Rat left = vals.front() / grid.front();
  Rat right = grid.size() > 1 ? (vals.back() - vals[vals.size() - 2]) /
                                    (grid.back() - grid[grid.size() - 2])
                              : left;
  return PiecewiseLinearFn(grid, vals, left, right);
}

/// Grid of distinct distances from state 0, preceded by a singleton radius.
inline std::vector<Rat> radius_grid(const FiniteInstance& inst) {
  FiniteMetric m{inst.dist};
  std::vector<Rat> grid = distance_spectrum(m, 0);
  if (grid.empty()) return {Rat(1)};
  grid.insert(grid.begin(), grid.front() / 2);
  return grid;
}

/// Exact delta certificate at state 0 from brute-force radius scans.
/// Requires pin_zero instances (the singleton radius always works there).
inline DeltaCertificate brute_delta_certificate(const FiniteInstance& inst) {
  const std::vector<Rat> grid = radius_grid(inst);
  std::vector<Rat> deltas;
  for (const Rat& eps : grid) deltas.push_back(*brute_delta_exists(inst, 0, eps));
  return {State{std::size_t{0}}, strict_interpolant(grid, deltas), grid,
          Scope::exact()};
}

/// Lyapunov certificate at state 0 built without converse_construct:
/// V(s) = max distance from 0 over the brute reachable set of s (a
/// decreasing monovariant for any maps), B = Id, A from a brute radius scan.
inline LyapunovCertificate vmax_lyapunov_certificate(
    const FiniteInstance& inst) {
  const std::size_t n = inst.states();
  std::vector<Rat> v(n, Rat(0));
  for (std::size_t s = 0; s < n; ++s) {
    const std::uint64_t mask = brute_reach(inst, std::uint64_t{1} << s);
    for (std::size_t u = 0; u < n; ++u)
      if (mask >> u & 1u) v[s] = std::max(v[s], inst.dist[0][u]);
  }

  std::vector<Rat> grid;
  {
    std::vector<Rat> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end());
    for (const Rat& x : sorted)
      if (x > 0 && (grid.empty() || grid.back() != x)) grid.push_back(x);
    if (grid.empty()) grid.push_back(Rat(1));
  }

  // A(g): largest candidate radius whose ball sits inside {V <= g}.
  Rat dmin = 0;
  for (std::size_t s = 1; s < n; ++s)
    if (dmin == 0 || inst.dist[0][s] < dmin) dmin = inst.dist[0][s];
  std::vector<Rat> cands{dmin / 2};
  {
    FiniteMetric m{inst.dist};
    for (const Rat& r : distance_spectrum(m, 0)) cands.push_back(r);
  }
  std::vector<Rat> a_vals;
  for (const Rat& g : grid) {
    Rat best = cands.front();
    for (const Rat& r : cands) {
      bool ok = true;
      for (std::size_t s = 0; s < n && ok; ++s)
        if (inst.dist[0][s] <= r && v[s] > g) ok = false;
      if (ok && r > best) best = r;
    }
    a_vals.push_back(best);
  }

  std::vector<ExtVal> table;
  for (const Rat& x : v) table.push_back(ExtVal::finite(x));
  DynamicalSystem sys = inst.to_system();
  LevelSetFamily fam = sublevel(TableObs{std::move(table)}, sys.space, grid);
  return {State{std::size_t{0}}, std::move(fam),
          strict_interpolant(grid, a_vals), PiecewiseLinearFn::identity(),
          Scope::exact()};
}

/// Random bijection of the positive reals: increasing breakpoints with a
/// zero infimum and a positive final slope.
inline PiecewiseLinearFn random_invertible_pl(std::mt19937_64& g) {
  const std::size_t k = 1 + rnd_below(g, 4);
  std::vector<Rat> xs, ys;
  Rat x = 0, y = 0;
  for (std::size_t i = 0; i < k; ++i) {
    x += Rat(1 + rnd_below(g, 8), 1 + rnd_below(g, 4));
    y += Rat(1 + rnd_below(g, 8), 1 + rnd_below(g, 4));
    xs.push_back(x);
    ys.push_back(y);
  }
  Rat left = ys.front() / xs.front();
  Rat right = Rat(1 + rnd_below(g, 8), 1 + rnd_below(g, 4));
  return PiecewiseLinearFn(std::move(xs), std::move(ys), left, right);
}

/// Random monotone extensional family over n states on a random grid.
inline LevelSetFamily random_extensional(std::mt19937_64& g, std::size_t n,
                                         std::size_t levels) {
  LevelSetFamily fam;
  LevelSetFamily::Extensional ext;
  Rat r = 0;
  FiniteSet acc(n);
  for (std::size_t i = 0; i < levels; ++i) {
    r += Rat(1 + rnd_below(g, 6), 1 + rnd_below(g, 3));
    for (std::size_t s = 0; s < n; ++s)
      if (rnd_below(g, 3) == 0) acc.insert(s);
    fam.grid.push_back(r);
    ext.sets.push_back(acc);
  }
  fam.back = std::move(ext);
  return fam;
}

}  // namespace testsupport
