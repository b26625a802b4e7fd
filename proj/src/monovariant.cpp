#include "lyapkit/monovariant.hpp"

#include <algorithm>
#include <cmath>

#include "lyapkit/errors.hpp"
#include "lyapkit/rng.hpp"

namespace lyap {

namespace {

Rat quad_form(const Mat& p, const Vec& x) {
  Rat acc = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) acc += x[i] * p[i][j] * x[j];
  return acc;
}

bool direction_ok(Direction dir, const ExtVal& before, const ExtVal& after) {
  return dir == Direction::Increasing ? before <= after : after <= before;
}

}  // namespace

ExtVal observe(const Observable& obs, const StateSpace& sp, const State& x) {
  if (const auto* d = std::get_if<DistanceTo>(&obs))
    return distance(sp, d->center, x);
  if (const auto* q = std::get_if<QuadraticFormObs>(&obs)) {
    if (!std::holds_alternative<Vec>(x))
      throw ValidationError("quadratic observable needs a Euclidean state");
    return ExtVal::finite(quad_form(q->p, std::get<Vec>(x)));
  }
  if (const auto* c = std::get_if<CoordinateObs>(&obs)) {
    const Vec& v = std::get<Vec>(x);
    if (c->index >= v.size())
      throw ValidationError("coordinate index out of range");
    return ExtVal::finite(v[c->index]);
  }
  if (const auto* t = std::get_if<TableObs>(&obs)) {
    std::size_t i = std::get<std::size_t>(x);
    if (i >= t->values.size())
      throw ValidationError("observable table does not cover the state");
    return t->values[i];
  }
  const auto& fam = *std::get<LeastLevelObs>(obs).family;
  for (const Rat& g : fam.grid)
    if (fam.member(sp, g, x)) return ExtVal::finite(g);
  return ExtVal::infinity();
}

std::vector<State> scope_states(const StateSpace& sp, const Scope& sc) {
  std::vector<State> out;
  if (is_finite(sp)) {
    for (std::size_t i = 0; i < finite_size(sp); ++i) out.push_back(i);
    return out;
  }
  if (sc.state_samples == 0)
    throw ValidationError(
        "Euclidean scope needs state_samples > 0 (exact enumeration is "
        "impossible)");
  std::mt19937_64 gen(sc.seed);
  const std::size_t dim = euclidean_dim(sp);
  for (unsigned k = 0; k < sc.state_samples; ++k) {
    Vec v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = rnd_dyadic(gen, sc.box);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<TimePoint> scope_times(const DynamicalSystem& sys,
                                   const Scope& sc) {
  if (!sc.horizon.exact()) return sample_times(sys.timeline, sc.horizon);
  std::vector<TimePoint> out{zero(sys.timeline)};
  for (std::size_t m = 0; m < sys.mode_count(); ++m)
    out.push_back(sys.timeline.kind == TimelineKind::FreeMonoid
                      ? TimePoint::word({static_cast<unsigned>(m)})
                      : TimePoint::ticks(1));
  return out;
}

Verdict check_monovariant(const DynamicalSystem& sys, const Observable& obs,
                          Direction dir, const Scope& sc) {
  if (sc.is_exact(sys.space)) {
    // One-step checks extend to every word by transitivity of the order.
    for (std::size_t i = 0; i < finite_size(sys.space); ++i) {
      ExtVal before = observe(obs, sys.space, i);
      for (std::size_t m = 0; m < sys.mode_count(); ++m) {
        State y = sys.apply_mode(i, m);
        ExtVal after = observe(obs, sys.space, y);
        if (!direction_ok(dir, before, after)) {
          Witness w;
          w.state = State(i);
          w.time = sys.timeline.kind == TimelineKind::FreeMonoid
                       ? TimePoint::word({static_cast<unsigned>(m)})
                       : TimePoint::ticks(1);
          w.note = "I(x)=" + before.to_string() +
                   ", I(F(x))=" + after.to_string();
          return Verdict::fail(w, "monovariance violated in one step");
        }
      }
    }
    return Verdict::proved_pass("one-step monovariance over all states");
  }
  const std::vector<State> states = scope_states(sys.space, sc);
  const std::vector<TimePoint> times = scope_times(sys, sc);
  for (const State& x : states) {
    ExtVal before = observe(obs, sys.space, x);
    for (const TimePoint& t : times) {
      ExtVal after = observe(obs, sys.space, sys.evolve(x, t));
      if (!direction_ok(dir, before, after)) {
        Witness w;
        w.state = x;
        w.time = t;
        w.note =
            "I(x)=" + before.to_string() + ", I(F_t(x))=" + after.to_string();
        return Verdict::fail(w, "monovariance violated at a sampled time");
      }
    }
  }
  return Verdict::sampled_pass("monovariant on sampled states and times");
}

void LevelSetFamily::validate(const StateSpace& sp) const {
  if (grid.empty()) throw ValidationError("level-set family needs a nonempty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] <= 0) throw ValidationError("grid radii must be positive");
    if (i > 0 && grid[i] <= grid[i - 1])
      throw ValidationError("grid radii must strictly increase");
  }
  if (const auto* ext = std::get_if<Extensional>(&back)) {
    if (!is_finite(sp))
      throw ValidationError("extensional families require a finite space");
    if (ext->sets.size() != grid.size())
      throw ValidationError("one level set per grid radius required");
    for (std::size_t i = 0; i < ext->sets.size(); ++i) {
      if (ext->sets[i].universe() != finite_size(sp))
        throw ValidationError("level set universe does not match the space");
      if (i > 0 && !ext->sets[i - 1].subset_of(ext->sets[i]))
        throw ValidationError(
            "level sets must be monotone along the radius grid");
    }
  } else if (const auto* ball = std::get_if<BallPred>(&back)) {
    if (!state_in_space(sp, ball->center))
      throw ValidationError("ball center does not belong to the space");
  } else if (const auto* cloud = std::get_if<SampleCloud>(&back)) {
    if (is_finite(sp))
      throw ValidationError("sample clouds are for Euclidean spaces");
    if (cloud->points.size() != grid.size())
      throw ValidationError("one sample cloud per grid radius required");
  }
}

bool LevelSetFamily::member(const StateSpace& sp, const Rat& radius,
                            const State& x) const {
  if (const auto* ext = std::get_if<Extensional>(&back)) {
    auto it = std::upper_bound(grid.begin(), grid.end(), radius);
    if (it == grid.begin()) return false;
    std::size_t idx = static_cast<std::size_t>(it - grid.begin()) - 1;
    return ext->sets[idx].contains(std::get<std::size_t>(x));
  }
  if (const auto* sub = std::get_if<SublevelPred>(&back))
    return observe(sub->obs, sp, x) <= ExtVal::finite(radius);
  if (const auto* cloud = std::get_if<SampleCloud>(&back)) {
    const Vec& v = std::get<Vec>(x);
    for (std::size_t i = 0; i < grid.size() && grid[i] <= radius; ++i)
      for (const auto& [p, t] : cloud->points[i])
        if (p == v) return true;
    return false;
  }
  const auto& ball = std::get<BallPred>(back);
  return distance_leq(sp, ball.center, x,
                      ball.scale ? (*ball.scale)(radius) : radius);
}

FiniteSet LevelSetFamily::set_at(const StateSpace& sp,
                                 const Rat& radius) const {
  if (!is_finite(sp))
    throw ValidationError("level sets materialize on finite spaces only");
  FiniteSet out(finite_size(sp));
  for (std::size_t i = 0; i < finite_size(sp); ++i)
    if (member(sp, radius, State(i))) out.insert(i);
  return out;
}

LevelSetFamily sublevel(const Observable& obs, const StateSpace& sp,
                        std::vector<Rat> grid) {
  LevelSetFamily fam;
  fam.grid = std::move(grid);
  if (is_finite(sp)) {
    LevelSetFamily::Extensional ext;
    for (const Rat& g : fam.grid) {
      FiniteSet s(finite_size(sp));
      for (std::size_t i = 0; i < finite_size(sp); ++i)
        if (observe(obs, sp, State(i)) <= ExtVal::finite(g)) s.insert(i);
      ext.sets.push_back(std::move(s));
    }
    fam.back = std::move(ext);
  } else {
    fam.back = LevelSetFamily::SublevelPred{obs};
  }
  fam.validate(sp);
  return fam;
}

LevelSetFamily ball_family(State center, std::vector<Rat> grid) {
  LevelSetFamily fam;
  fam.grid = std::move(grid);
  fam.back = LevelSetFamily::BallPred{std::move(center), std::nullopt};
  return fam;
}

LevelSetFamily scaled_ball_family(State center, PiecewiseLinearFn scale,
                                  std::vector<Rat> grid) {
  LevelSetFamily fam;
  fam.grid = std::move(grid);
  fam.back = LevelSetFamily::BallPred{std::move(center), std::move(scale)};
  return fam;
}

Verdict check_levelset_laxcone(const DynamicalSystem& sys,
                               const LevelSetFamily& fam, const Scope& sc) {
  fam.validate(sys.space);
  if (sc.is_exact(sys.space)) {
    for (const Rat& r : fam.grid) {
      FiniteSet s = fam.set_at(sys.space, r);
      for (std::size_t i : s.elements())
        for (std::size_t m = 0; m < sys.mode_count(); ++m) {
          State y = sys.apply_mode(i, m);
          if (!s.contains(std::get<std::size_t>(y))) {
            Witness w;
            w.state = State(i);
            w.time = sys.timeline.kind == TimelineKind::FreeMonoid
                         ? TimePoint::word({static_cast<unsigned>(m)})
                         : TimePoint::ticks(1);
            w.epsilon = r;
            return Verdict::fail(w, "level set is not forward invariant");
          }
        }
    }
    return Verdict::proved_pass("every grid level set is forward invariant");
  }
  const std::vector<TimePoint> times = scope_times(sys, sc);
  if (const auto* cloud =
          std::get_if<LevelSetFamily::SampleCloud>(&fam.back)) {
    // Reach clouds record how much of the horizon each point consumed;
    // invariance is checked on the budget that remains.
    for (std::size_t gi = 0; gi < fam.grid.size(); ++gi)
      for (const auto& [p, spent] : cloud->points[gi])
        for (const TimePoint& t : times) {
          if (!horizon_admits(sys.timeline, sc.horizon, spent, t)) continue;
          State y = sys.evolve(p, t);
          if (!fam.member(sys.space, fam.grid[gi], y)) {
            Witness w;
            w.state = State(p);
            w.time = t;
            w.epsilon = fam.grid[gi];
            return Verdict::fail(w, "level set is not forward invariant");
          }
        }
    return Verdict::sampled_pass(
        "reach clouds forward invariant within the horizon budget");
  }
  const std::vector<State> states = scope_states(sys.space, sc);
  for (const Rat& r : fam.grid)
    for (const State& x : states) {
      if (!fam.member(sys.space, r, x)) continue;
      for (const TimePoint& t : times) {
        State y = sys.evolve(x, t);
        if (!fam.member(sys.space, r, y)) {
          Witness w;
          w.state = x;
          w.time = t;
          w.epsilon = r;
          return Verdict::fail(w, "level set is not forward invariant");
        }
      }
    }
  return Verdict::sampled_pass(
      "level sets forward invariant on sampled states and times");
}

ExtVal v_max(const Observable& obs, const StateSpace& sp, const StateSet& s) {
  std::vector<State> members;
  if (const auto* fs = std::get_if<FiniteSet>(&s)) {
    for (std::size_t i : fs->elements()) members.push_back(i);
  } else {
    for (const Vec& p : std::get<SampleSet>(s).points) members.push_back(p);
  }
  if (members.empty())
    throw ValidationError("v_max of an empty set is undefined");
  ExtVal best = observe(obs, sp, members.front());
  for (std::size_t k = 1; k < members.size(); ++k) {
    ExtVal v = observe(obs, sp, members[k]);
    if (best < v) best = v;
  }
  return best;
}

Verdict check_attractor(const DynamicalSystem& sys, const State& x_star,
                        const Scope& sc) {
  if (!state_in_space(sys.space, x_star))
    throw ValidationError("candidate attractor is not a state of the space");
  Verdict mono =
      check_monovariant(sys, DistanceTo{x_star}, Direction::Decreasing, sc);
  if (!mono.passed()) {
    mono.detail = "distance to the point is not decreasing: " + mono.detail;
    return mono;
  }
  StateSet singleton =
      is_finite(sys.space)
          ? StateSet(FiniteSet::singleton(finite_size(sys.space),
                                          std::get<std::size_t>(x_star)))
          : StateSet(SampleSet{{std::get<Vec>(x_star)}, "singleton"});
  Horizon h = sc.is_exact(sys.space) ? Horizon::unbounded() : sc.horizon;
  Verdict eq = is_equilibrium(sys, singleton, h);
  Verdict out = mono.meet(eq);
  out.detail = "attractor (distance decreasing) and equilibrium both hold";
  if (!eq.passed())
    out.detail = "distance decreases but the point is not an equilibrium: " +
                 eq.detail;
  return out;
}

ExtVal apply_comparison(const PiecewiseLinearFn& f, const ExtVal& v) {
  if (v.kind() == ExtVal::Kind::Infinite)
    return f.unbounded_image() ? ExtVal::infinity()
                               : ExtVal::finite(*f.sup_value());
  if (v.kind() == ExtVal::Kind::Finite) {
    const Rat& q = v.rational();
    if (q < 0)
      throw ValidationError("comparison functions take nonnegative inputs");
    return ExtVal::finite(q == 0 ? f.inf_value() : f(q));
  }
  const Rat& payload = v.payload();
  if (payload == 0) return ExtVal::finite(f.inf_value());
  double root = std::sqrt(rat_to_double(payload));
  return ExtVal::finite(rat_from_double(f.eval_double(root)));
}

Verdict check_rough_approx(const Observable& i_obs, const Observable& j_obs,
                           const PiecewiseLinearFn& a,
                           const PiecewiseLinearFn& b, const StateSpace& sp,
                           const Scope& sc) {
  for (const State& x : scope_states(sp, sc)) {
    ExtVal vi = observe(i_obs, sp, x);
    ExtVal vj = observe(j_obs, sp, x);
    ExtVal lo = apply_comparison(a, vi);
    ExtVal hi = apply_comparison(b, vi);
    if (!(lo <= vj) || !(vj <= hi)) {
      Witness w;
      w.state = x;
      w.note = "A(I(m))=" + lo.to_string() + ", J(m)=" + vj.to_string() +
               ", B(I(m))=" + hi.to_string();
      return Verdict::fail(w, "rough-approximation bound violated");
    }
  }
  return is_finite(sp)
             ? Verdict::proved_pass("bounds hold on every state")
             : Verdict::sampled_pass("bounds hold on sampled states");
}

}  // namespace lyap
