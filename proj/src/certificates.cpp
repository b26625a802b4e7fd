#include "lyapkit/certificates.hpp"

#include <algorithm>

#include "lyapkit/errors.hpp"
#include "lyapkit/rng.hpp"

namespace lyap {

namespace {

void validate_grid(const std::vector<Rat>& grid) {
  if (grid.empty()) throw ValidationError("certificate needs a nonempty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] <= 0) throw ValidationError("grid radii must be positive");
    if (i > 0 && grid[i] <= grid[i - 1])
      throw ValidationError("grid radii must strictly increase");
  }
}

std::uint64_t salted(std::uint64_t seed, std::uint64_t salt) {
  return seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
}

/// States known to lie in B(center, r): every such state on finite spaces,
/// a seeded deterministic sample cloud (center included) on Euclidean ones.
std::vector<State> ball_points(const StateSpace& sp, const State& center,
                               const Rat& r, const Scope& sc,
                               std::uint64_t salt) {
  std::vector<State> out;
  if (is_finite(sp)) {
    for (std::size_t i = 0; i < finite_size(sp); ++i)
      if (distance_leq(sp, center, State(i), r)) out.push_back(i);
    return out;
  }
  const Vec& c = std::get<Vec>(center);
  out.push_back(c);
  if (sc.state_samples == 0)
    throw ValidationError(
        "Euclidean scope needs state_samples > 0 to sample a ball");
  std::mt19937_64 gen(salted(sc.seed, salt));
  unsigned kept = 0, attempts = 0;
  const unsigned limit = 64 * sc.state_samples;
  while (kept + 1 < sc.state_samples && attempts < limit) {
    ++attempts;
    Vec v(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
      v[i] = c[i] + rnd_dyadic(gen, r);
    if (!distance_leq(sp, center, State(v), r)) continue;
    out.push_back(std::move(v));
    ++kept;
  }
  return out;
}

std::size_t floor_index(const std::vector<Rat>& grid, const Rat& r) {
  auto it = std::upper_bound(grid.begin(), grid.end(), r);
  if (it == grid.begin())
    throw ValidationError("radius below the smallest grid point");
  return static_cast<std::size_t>(it - grid.begin()) - 1;
}

/// States known to lie in fam(r).
std::vector<State> family_members(const StateSpace& sp,
                                  const LevelSetFamily& fam, const Rat& r,
                                  const Scope& sc, std::uint64_t salt) {
  std::vector<State> out;
  if (is_finite(sp)) {
    for (std::size_t i : fam.set_at(sp, r).elements()) out.push_back(i);
    return out;
  }
  if (const auto* cloud =
          std::get_if<LevelSetFamily::SampleCloud>(&fam.back)) {
    for (std::size_t i = 0; i < fam.grid.size() && fam.grid[i] <= r; ++i)
      for (const auto& [p, t] : cloud->points[i]) out.push_back(p);
    return out;
  }
  if (const auto* ball = std::get_if<LevelSetFamily::BallPred>(&fam.back))
    return ball_points(sp, ball->center,
                       ball->scale ? (*ball->scale)(r) : r, sc, salt);
  for (const State& x : scope_states(sp, sc))
    if (fam.member(sp, r, x)) out.push_back(x);
  return out;
}

StateSet as_state_set(const StateSpace& sp, const std::vector<State>& states) {
  if (is_finite(sp)) {
    FiniteSet s(finite_size(sp));
    for (const State& x : states) s.insert(std::get<std::size_t>(x));
    return s;
  }
  SampleSet s;
  for (const State& x : states) s.points.push_back(std::get<Vec>(x));
  return s;
}

Verdict pass_for(const Scope& sc, const StateSpace& sp, std::string detail) {
  return sc.is_exact(sp) ? Verdict::proved_pass(std::move(detail))
                         : Verdict::sampled_pass(std::move(detail));
}

}  // namespace

void DeltaCertificate::validate(const StateSpace& sp) const {
  validate_grid(grid);
  if (!state_in_space(sp, x_star))
    throw ValidationError("equilibrium point is not a state of the space");
}

void LyapunovCertificate::validate(const StateSpace& sp) const {
  if (!b.invertible())
    throw NotInvertibleError(
        "the upper comparison function B must be a bijection of the positive "
        "reals");
  validate_grid(family.grid);
  family.validate(sp);
  if (!state_in_space(sp, x_star))
    throw ValidationError("equilibrium point is not a state of the space");
}

Verdict verify_delta(const DynamicalSystem& sys, const DeltaCertificate& c) {
  c.validate(sys.space);
  const Horizon h =
      c.scope.is_exact(sys.space) ? Horizon::unbounded() : c.scope.horizon;
  for (std::size_t gi = 0; gi < c.grid.size(); ++gi) {
    const Rat& eps = c.grid[gi];
    const Rat shrunk = c.delta(eps);
    std::vector<State> starts =
        ball_points(sys.space, c.x_star, shrunk, c.scope, gi);
    for (const Reached& r :
         future_witnessed(sys, as_state_set(sys.space, starts), h)) {
      if (!distance_leq(sys.space, c.x_star, r.state, eps)) {
        Witness w;
        w.state = r.state;
        w.time = r.time;
        w.epsilon = eps;
        w.note = "escapes B(x*, " + rat_to_string(eps) + ") from B(x*, " +
                 rat_to_string(shrunk) + ")";
        return Verdict::fail(w, "delta cell violated");
      }
    }
  }
  return pass_for(c.scope, sys.space,
                  "future(B(x*, delta(e))) inside B(x*, e) on the whole grid");
}

Verdict verify_lyapunov(const DynamicalSystem& sys,
                        const LyapunovCertificate& c) {
  c.validate(sys.space);
  Verdict decrease = check_levelset_laxcone(sys, c.family, c.scope);
  if (!decrease.passed()) {
    decrease.detail = "forward decrease failed: " + decrease.detail;
    return decrease;
  }
  for (std::size_t gi = 0; gi < c.family.grid.size(); ++gi) {
    const Rat& g = c.family.grid[gi];
    const Rat lower = c.a(g);
    for (const State& x : ball_points(sys.space, c.x_star, lower, c.scope, gi))
      if (!c.family.member(sys.space, g, x)) {
        Witness w;
        w.state = x;
        w.epsilon = g;
        w.note = "point of B(x*, A(e)) outside the level set";
        return Verdict::fail(w, "lower sandwich violated");
      }
    const Rat upper = c.b(g);
    for (const State& x : family_members(sys.space, c.family, g, c.scope, gi))
      if (!distance_leq(sys.space, c.x_star, x, upper)) {
        Witness w;
        w.state = x;
        w.epsilon = g;
        w.note = "level-set point outside B(x*, B(e))";
        return Verdict::fail(w, "upper sandwich violated");
      }
  }
  Verdict sandwich = pass_for(c.scope, sys.space,
                              "ball sandwich holds on the whole grid");
  return decrease.meet(sandwich);
}

DeltaCertificate delta_from_lyapunov(const LyapunovCertificate& c) {
  PiecewiseLinearFn b_inv = invert(c.b);
  PiecewiseLinearFn delta = compose(c.a, b_inv);
  PropertyTag expected = compose(properties(c.a), inverse(properties(c.b)));
  PropertyTag actual = properties(delta);
  if ((expected.invertible && !actual.invertible) ||
      (expected.unbounded_image && !actual.unbounded_image) ||
      (expected.identity && !actual.identity))
    throw Error("property algebra violated by composition");
  std::vector<Rat> grid;
  grid.reserve(c.family.grid.size());
  for (const Rat& g : c.family.grid) grid.push_back(c.b(g));
  return DeltaCertificate{c.x_star, std::move(delta), std::move(grid),
                          c.scope};
}

Verdict verify_factorization(const DynamicalSystem& sys,
                             const Factorization& f) {
  validate_grid(f.grid);
  if (f.s1.grid != f.grid || f.s2.grid != f.grid)
    throw ValidationError("factorization families must share the grid");
  f.s1.validate(sys.space);
  f.s2.validate(sys.space);
  const Horizon h =
      f.scope.is_exact(sys.space) ? Horizon::unbounded() : f.scope.horizon;
  for (std::size_t gi = 0; gi < f.grid.size(); ++gi) {
    const Rat& eps = f.grid[gi];
    // beta: B(x*, delta_-(e)) inside S1(e)
    for (const State& x :
         ball_points(sys.space, f.x_star, f.delta_minus(eps), f.scope, gi))
      if (!f.s1.member(sys.space, eps, x)) {
        Witness w;
        w.state = x;
        w.epsilon = eps;
        return Verdict::fail(w, "left triangle (beta) violated");
      }
    // alpha: future(S1(e)) inside S2(e)
    std::vector<State> starts =
        family_members(sys.space, f.s1, eps, f.scope, gi);
    for (const Reached& r :
         future_witnessed(sys, as_state_set(sys.space, starts), h))
      if (!f.s2.member(sys.space, eps, r.state)) {
        Witness w;
        w.state = r.state;
        w.time = r.time;
        w.epsilon = eps;
        return Verdict::fail(w, "inner cell (alpha) violated");
      }
    // gamma: S2(delta_+(e)) inside B(x*, e)
    for (const State& x : family_members(sys.space, f.s2, f.delta_plus(eps),
                                         f.scope, gi))
      if (!distance_leq(sys.space, f.x_star, x, eps)) {
        Witness w;
        w.state = x;
        w.epsilon = eps;
        return Verdict::fail(w, "right triangle (gamma) violated");
      }
  }
  return pass_for(f.scope, sys.space, "all three factorization cells hold");
}

Factorization factorize(const DynamicalSystem& sys,
                        const DeltaCertificate& c) {
  c.validate(sys.space);
  Factorization f{c.x_star,
                  PiecewiseLinearFn::identity(),
                  c.delta,
                  scaled_ball_family(c.x_star, c.delta, c.grid),
                  ball_family(c.x_star, c.grid),
                  c.grid,
                  c.scope};
  Verdict check = verify_factorization(sys, f);
  if (!check.passed())
    throw ValidationError("factorization cells do not hold: " + check.detail);
  return f;
}

DeltaCertificate compose_factorization(const Factorization& f) {
  return DeltaCertificate{f.x_star, compose(f.delta_minus, f.delta_plus),
                          f.grid, f.scope};
}

LyapunovCertificate converse_construct(const DynamicalSystem& sys,
                                       const DeltaCertificate& c) {
  c.validate(sys.space);
  LevelSetFamily fam;
  if (c.delta.is_identity()) {
    // S1 = S2: the balls themselves are the level-set family.
    fam = ball_family(c.x_star, c.grid);
  } else if (is_finite(sys.space)) {
    LevelSetFamily::Extensional ext;
    for (const Rat& eps : c.grid) {
      FiniteSet start(finite_size(sys.space));
      for (std::size_t i = 0; i < finite_size(sys.space); ++i)
        if (distance_leq(sys.space, c.x_star, State(i), c.delta(eps)))
          start.insert(i);
      // Reachability closes exactly on a finite space, whatever the scope.
      ext.sets.push_back(
          std::get<FiniteSet>(future(sys, start, Horizon::unbounded())));
    }
    fam.grid = c.grid;
    fam.back = std::move(ext);
  } else {
    if (c.scope.horizon.exact())
      throw UnsupportedExactReachError(
          "converse construction on a Euclidean space needs a horizon");
    LevelSetFamily::SampleCloud cloud;
    for (std::size_t gi = 0; gi < c.grid.size(); ++gi) {
      std::vector<State> seeds =
          ball_points(sys.space, c.x_star, c.delta(c.grid[gi]), c.scope, gi);
      std::vector<std::pair<Vec, TimePoint>> pts;
      for (const Reached& r : future_witnessed(
               sys, as_state_set(sys.space, seeds), c.scope.horizon))
        pts.emplace_back(std::get<Vec>(r.state), r.time);
      cloud.points.push_back(std::move(pts));
    }
    fam.grid = c.grid;
    fam.back = std::move(cloud);
  }
  return LyapunovCertificate{c.x_star, std::move(fam), c.delta,
                             PiecewiseLinearFn::identity(), c.scope};
}

Observable pointwise_from_levelsets(const LevelSetFamily& fam) {
  return LeastLevelObs{std::make_shared<const LevelSetFamily>(fam)};
}

namespace {

Verdict global_verdict(const PiecewiseLinearFn& f, const char* name) {
  if (f.invertible())
    return Verdict::proved_pass(std::string(name) +
                                " is a bijection of the positive reals: the "
                                "basin is the whole space");
  Witness w;
  std::string why;
  if (f.inf_value() > 0)
    why = std::string(name) + " has positive infimum " +
          rat_to_string(f.inf_value());
  else
    why = std::string(name) + " has image bounded above by " +
          rat_to_string(*f.sup_value());
  w.note = why;
  return Verdict::fail(w, "not global: " + why);
}

}  // namespace

Verdict check_global(const DeltaCertificate& c) {
  return global_verdict(c.delta, "delta");
}

Verdict check_global(const LyapunovCertificate& c) {
  return global_verdict(c.a, "A");
}

Verdict triangle_via_b(const StateSpace& sp, const State& x_star,
                       const LevelSetFamily& fam, const PiecewiseLinearFn& b,
                       const Scope& sc) {
  for (std::size_t gi = 0; gi < fam.grid.size(); ++gi) {
    const Rat& eps = fam.grid[gi];
    const Rat bound = b(eps);
    for (const State& x : family_members(sp, fam, eps, sc, gi))
      if (!distance_leq(sp, x_star, x, bound)) {
        Witness w;
        w.state = x;
        w.epsilon = eps;
        return Verdict::fail(w, "level set exceeds B(x*, B(e))");
      }
  }
  Verdict v = is_finite(sp)
                  ? Verdict::proved_pass("triangle via B holds on the grid")
                  : Verdict::sampled_pass("triangle via B holds on samples");
  return v;
}

Verdict triangle_via_b_inverse(const StateSpace& sp, const State& x_star,
                               const LevelSetFamily& fam,
                               const PiecewiseLinearFn& b, const Scope& sc) {
  PiecewiseLinearFn b_inv = invert(b);
  for (std::size_t gi = 0; gi < fam.grid.size(); ++gi) {
    const Rat eps_image = b(fam.grid[gi]);
    const Rat back_on_grid = b_inv(eps_image);
    for (const State& x : family_members(sp, fam, back_on_grid, sc, gi))
      if (!distance_leq(sp, x_star, x, eps_image)) {
        Witness w;
        w.state = x;
        w.epsilon = eps_image;
        return Verdict::fail(w, "level set at B^{-1}(e') exceeds B(x*, e')");
      }
  }
  Verdict v =
      is_finite(sp)
          ? Verdict::proved_pass("triangle via B^{-1} holds on the grid")
          : Verdict::sampled_pass("triangle via B^{-1} holds on samples");
  return v;
}

}  // namespace lyap
