#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "lyapkit/comparison.hpp"
#include "lyapkit/system.hpp"

namespace lyap {

struct LevelSetFamily;

/// d(center, x).
struct DistanceTo {
  State center;
};

/// x^T P x with exact rational P (symmetric; definiteness is the caller's
/// concern and is checked numerically where certificates are built).
struct QuadraticFormObs {
  Mat p;
};

/// x_i (may be negative: the poset is the extended rational line).
struct CoordinateObs {
  std::size_t index = 0;
};

/// Explicit value table on a finite space.
struct TableObs {
  std::vector<ExtVal> values;
};

/// Least grid radius whose level set contains the state (+inf if none);
/// the observable recovered from a level-set family by adjunction.
struct LeastLevelObs {
  std::shared_ptr<const LevelSetFamily> family;
};

using Observable = std::variant<DistanceTo, QuadraticFormObs, CoordinateObs,
                                TableObs, LeastLevelObs>;

/// Value of the observable at a state.
ExtVal observe(const Observable& obs, const StateSpace& sp, const State& x);

/// Whether a monovariant moves up or down along trajectories. The level-set
/// and Lyapunov machinery use Decreasing (values shrink forward in time).
enum class Direction { Increasing, Decreasing };

/// Quantification scope for a check. An unbounded horizon on a finite space
/// quantifies exactly (PROVED verdicts); anything else samples: bounded time
/// enumeration plus, on Euclidean spaces, `state_samples` seeded dyadic
/// points from the box [-box, box]^n.
struct Scope {
  Horizon horizon;
  unsigned state_samples = 0;
  std::uint64_t seed = 0;
  Rat box = 4;

  static Scope exact() { return {}; }
  static Scope sampled(Horizon h, unsigned states, std::uint64_t seed,
                       Rat box = 4) {
    return {std::move(h), states, seed, std::move(box)};
  }
  bool is_exact(const StateSpace& sp) const {
    return horizon.exact() && is_finite(sp);
  }
};

/// The states a scope ranges over: every state of a finite space, or the
/// seeded sample cloud on a Euclidean one.
std::vector<State> scope_states(const StateSpace& sp, const Scope& sc);

/// The time points a scope ranges over (one-step times suffice for exact
/// scopes; bounded scopes enumerate sample_times).
std::vector<TimePoint> scope_times(const DynamicalSystem& sys,
                                   const Scope& sc);

/// Is obs monotone (in the given direction) along every trajectory?
/// Exact scopes decide by one-step generator checks, which extend to all
/// words by transitivity. FAIL carries the state and time that violate it.
Verdict check_monovariant(const DynamicalSystem& sys, const Observable& obs,
                          Direction dir, const Scope& sc);

/// Monotone family of sublevel sets indexed by a positive radius grid.
/// Extensional on finite spaces; predicate-backed otherwise. Off-grid
/// queries on extensional families floor to the largest grid radius below.
struct LevelSetFamily {
  struct Extensional {
    std::vector<FiniteSet> sets;  // aligned with grid
  };
  struct SublevelPred {
    Observable obs;
  };
  struct BallPred {
    State center;
    /// With a scale, member(r) tests d <= scale(r): the family
    /// B(x*, scale(.)).
    std::optional<PiecewiseLinearFn> scale;
  };
  /// Euclidean reach clouds: exact sample points per grid radius, each with
  /// the time that reached it. Membership at radius r is membership in any
  /// cloud of grid radius <= r (a union, hence monotone by construction).
  struct SampleCloud {
    std::vector<std::vector<std::pair<Vec, TimePoint>>> points;
  };

  std::vector<Rat> grid;
  std::variant<Extensional, SublevelPred, BallPred, SampleCloud> back;

  void validate(const StateSpace& sp) const;
  bool member(const StateSpace& sp, const Rat& radius, const State& x) const;
  /// Materialized set at a grid radius (finite spaces).
  FiniteSet set_at(const StateSpace& sp, const Rat& radius) const;
  bool is_ball() const {
    const auto* b = std::get_if<BallPred>(&back);
    return b && (!b->scale || b->scale->is_identity());
  }
  const State& ball_center() const {
    return std::get<BallPred>(back).center;
  }
};

/// {x | obs(x) <= r} per grid radius.
LevelSetFamily sublevel(const Observable& obs, const StateSpace& sp,
                        std::vector<Rat> grid);

/// Closed balls around a center: the level-set family of DistanceTo(center).
LevelSetFamily ball_family(State center, std::vector<Rat> grid);

/// Shrunken balls r -> B(center, scale(r)).
LevelSetFamily scaled_ball_family(State center, PiecewiseLinearFn scale,
                                  std::vector<Rat> grid);

/// Forward invariance of every grid level set: P(F_t)(fam(r)) within fam(r).
Verdict check_levelset_laxcone(const DynamicalSystem& sys,
                               const LevelSetFamily& fam, const Scope& sc);

/// Supremum of the observable over a nonempty set.
ExtVal v_max(const Observable& obs, const StateSpace& sp, const StateSet& s);

/// Attractor test: DistanceTo(x*) decreasing; a pass also asserts that {x*}
/// is an equilibrium and reports both facts.
Verdict check_attractor(const DynamicalSystem& sys, const State& x_star,
                        const Scope& sc);

/// Continuous extension of a comparison function to the extended value
/// line: f(0+) at zero, sup at +inf when bounded. Square-root inputs (only
/// reachable in sampled Euclidean scopes) are evaluated in floating point.
ExtVal apply_comparison(const PiecewiseLinearFn& f, const ExtVal& v);

/// Two-sided bound check A(I(m)) <= J(m) <= B(I(m)) over the scope.
Verdict check_rough_approx(const Observable& i_obs, const Observable& j_obs,
                           const PiecewiseLinearFn& a,
                           const PiecewiseLinearFn& b, const StateSpace& sp,
                           const Scope& sc);

}  // namespace lyap
