#include "lyapkit/system.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "lyapkit/errors.hpp"

namespace lyap {

namespace {

Vec matvec(const Mat& a, const Vec& x) {
  Vec y(a.size(), Rat(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

void require_square(const Mat& a, std::size_t n, const char* what) {
  if (a.size() != n)
    throw ValidationError(std::string(what) + ": matrix rows do not match the "
                                              "space dimension");
  for (const auto& row : a)
    if (row.size() != n)
      throw ValidationError(std::string(what) + ": matrix is not square");
}

std::size_t expected_arity(const Timeline& tl) {
  switch (tl.kind) {
    case TimelineKind::DiscreteLinear:
      return 1;
    case TimelineKind::FreeMonoid:
      return tl.alphabet_size;
    case TimelineKind::ContinuousLinear:
      return 0;
  }
  return 0;
}

TimePoint one_step(const Timeline& tl, std::size_t mode) {
  if (tl.kind == TimelineKind::FreeMonoid)
    return TimePoint::word({static_cast<unsigned>(mode)});
  return TimePoint::ticks(1);
}

}  // namespace

void DynamicalSystem::validate() const {
  if (std::holds_alternative<UniformMotion>(generators)) {
    if (timeline.kind != TimelineKind::ContinuousLinear)
      throw ValidationError("uniform motion needs the continuous timeline");
    if (!std::holds_alternative<EuclideanSpace>(space))
      throw ValidationError("uniform motion needs a Euclidean space");
    const auto& um = std::get<UniformMotion>(generators);
    if (um.velocity.size() != euclidean_dim(space))
      throw ValidationError("velocity dimension does not match the space");
    return;
  }
  if (timeline.kind == TimelineKind::ContinuousLinear)
    throw ValidationError(
        "continuous timeline supports only the uniform-motion generator");
  const std::size_t arity = expected_arity(timeline);

  if (const auto* fm = std::get_if<FiniteMaps>(&generators)) {
    if (!is_finite(space))
      throw ValidationError("finite transition maps need a finite space");
    if (fm->maps.size() != arity)
      throw ValidationError("one transition map per alphabet letter required");
    const std::size_t n = finite_size(space);
    for (const auto& m : fm->maps) {
      if (m.size() != n)
        throw ValidationError("transition map must be total on the states");
      for (std::size_t img : m)
        if (img >= n) throw ValidationError("transition map image out of range");
    }
  } else if (const auto* lm = std::get_if<LinearMaps>(&generators)) {
    if (!std::holds_alternative<EuclideanSpace>(space))
      throw ValidationError("linear maps need a Euclidean space");
    if (lm->mats.size() != arity)
      throw ValidationError("one matrix per alphabet letter required");
    for (const auto& a : lm->mats)
      require_square(a, euclidean_dim(space), "linear generator");
  } else {
    const auto& am = std::get<AffineMaps>(generators);
    if (!std::holds_alternative<EuclideanSpace>(space))
      throw ValidationError("affine maps need a Euclidean space");
    const bool switching = timeline.kind == TimelineKind::FreeMonoid &&
                           timeline.alphabet_size == 2;
    // Switching control uses the two-letter alphabet {apply A, apply A + b};
    // on the discrete timeline the single iterated step is x -> A x + b.
    if (!switching && timeline.kind != TimelineKind::DiscreteLinear)
      throw ValidationError(
          "affine maps need the discrete timeline or the two-letter "
          "switching alphabet");
    const std::size_t n = euclidean_dim(space);
    require_square(am.a, n, "affine generator");
    if (am.b.size() != n)
      throw ValidationError("affine offset dimension does not match the space");
  }
}

std::size_t DynamicalSystem::mode_count() const {
  if (std::holds_alternative<UniformMotion>(generators)) return 0;
  if (const auto* fm = std::get_if<FiniteMaps>(&generators))
    return fm->maps.size();
  if (const auto* lm = std::get_if<LinearMaps>(&generators))
    return lm->mats.size();
  return timeline.kind == TimelineKind::DiscreteLinear ? 1 : 2;
}

State DynamicalSystem::apply_mode(const State& x, std::size_t mode) const {
  if (mode >= mode_count())
    throw ValidationError("generator index out of range");
  if (const auto* fm = std::get_if<FiniteMaps>(&generators))
    return fm->maps[mode][std::get<std::size_t>(x)];
  if (const auto* lm = std::get_if<LinearMaps>(&generators))
    return matvec(lm->mats[mode], std::get<Vec>(x));
  const auto& am = std::get<AffineMaps>(generators);
  Vec y = matvec(am.a, std::get<Vec>(x));
  if (mode == 1 || timeline.kind == TimelineKind::DiscreteLinear)
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += am.b[i];
  return y;
}

State DynamicalSystem::evolve(const State& x, const TimePoint& t) const {
  if (!state_in_space(space, x))
    throw ValidationError("state does not belong to the system's space");
  switch (timeline.kind) {
    case TimelineKind::ContinuousLinear: {
      const auto& um = std::get<UniformMotion>(generators);
      const Rat& dt = t.duration_value();
      Vec y = std::get<Vec>(x);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += um.velocity[i] * dt;
      return y;
    }
    case TimelineKind::DiscreteLinear: {
      State y = x;
      for (std::uint64_t k = 0; k < t.tick_count(); ++k) y = apply_mode(y, 0);
      return y;
    }
    case TimelineKind::FreeMonoid: {
      State y = x;
      for (unsigned letter : t.word_value()) y = apply_mode(y, letter);
      return y;
    }
  }
  throw ValidationError("unknown timeline kind");
}

std::vector<TimePoint> sample_times(const Timeline& tl, const Horizon& h) {
  if (h.exact())
    throw ValidationError("cannot enumerate an unbounded horizon");
  std::vector<TimePoint> out;
  switch (tl.kind) {
    case TimelineKind::DiscreteLinear:
      for (std::uint64_t k = 0; k <= h.max_steps; ++k)
        out.push_back(TimePoint::ticks(k));
      break;
    case TimelineKind::FreeMonoid: {
      std::vector<Word> level{Word{}};
      out.push_back(TimePoint::word({}));
      for (std::uint64_t len = 1; len <= h.max_steps; ++len) {
        std::vector<Word> next;
        for (const Word& w : level)
          for (unsigned a = 0; a < tl.alphabet_size; ++a) {
            Word v = w;
            v.push_back(a);
            out.push_back(TimePoint::word(v));
            next.push_back(std::move(v));
          }
        level = std::move(next);
      }
      break;
    }
    case TimelineKind::ContinuousLinear: {
      if (h.kind != Horizon::Kind::Time || h.samples == 0)
        throw ValidationError(
            "continuous timeline needs a time horizon with samples >= 1");
      for (unsigned k = 0; k <= h.samples; ++k)
        out.push_back(TimePoint::duration(h.max_time * k / h.samples));
      break;
    }
  }
  return out;
}

bool horizon_admits(const Timeline& tl, const Horizon& h,
                    const TimePoint& spent, const TimePoint& more) {
  if (h.exact()) return true;
  switch (tl.kind) {
    case TimelineKind::DiscreteLinear:
      return spent.tick_count() + more.tick_count() <= h.max_steps;
    case TimelineKind::FreeMonoid:
      return spent.word_value().size() + more.word_value().size() <=
             h.max_steps;
    case TimelineKind::ContinuousLinear:
      return spent.duration_value() + more.duration_value() <= h.max_time;
  }
  return false;
}

namespace {

std::vector<Reached> finite_future(const DynamicalSystem& sys,
                                   const FiniteSet& s, const Horizon& h) {
  if (h.kind == Horizon::Kind::Time)
    throw ValidationError("time horizons apply to continuous systems only");
  const bool bounded = h.kind == Horizon::Kind::Steps;
  struct Node {
    std::size_t state;
    TimePoint t;
    std::uint64_t depth;
  };
  std::vector<bool> seen(finite_size(sys.space), false);
  std::deque<Node> queue;
  std::vector<Reached> out;
  for (std::size_t i : s.elements()) {
    seen[i] = true;
    TimePoint z = zero(sys.timeline);
    out.push_back({State(i), z});
    queue.push_back({i, z, 0});
  }
  while (!queue.empty()) {
    Node cur = std::move(queue.front());
    queue.pop_front();
    if (bounded && cur.depth == h.max_steps) continue;
    for (std::size_t m = 0; m < sys.mode_count(); ++m) {
      std::size_t y = std::get<std::size_t>(sys.apply_mode(cur.state, m));
      if (seen[y]) continue;
      seen[y] = true;
      TimePoint t = plus(sys.timeline, cur.t, one_step(sys.timeline, m));
      out.push_back({State(y), t});
      queue.push_back({y, t, cur.depth + 1});
    }
  }
  return out;
}

std::vector<Reached> euclidean_future(const DynamicalSystem& sys,
                                      const SampleSet& s, const Horizon& h) {
  if (h.exact())
    throw UnsupportedExactReachError(
        "exact reachability is available on finite spaces only; supply a "
        "horizon");
  std::vector<Reached> out;
  if (std::holds_alternative<UniformMotion>(sys.generators)) {
    for (const TimePoint& t : sample_times(sys.timeline, h))
      for (const Vec& p : s.points) out.push_back({sys.evolve(p, t), t});
    return out;
  }
  if (h.kind != Horizon::Kind::Steps)
    throw ValidationError("step-counted horizon required for generated systems");
  struct Node {
    Vec state;
    TimePoint t;
    std::uint64_t depth;
  };
  std::map<Vec, bool> seen;
  std::deque<Node> queue;
  for (const Vec& p : s.points) {
    if (seen.emplace(p, true).second) {
      TimePoint z = zero(sys.timeline);
      out.push_back({State(p), z});
      queue.push_back({p, z, 0});
    }
  }
  while (!queue.empty()) {
    Node cur = std::move(queue.front());
    queue.pop_front();
    if (cur.depth == h.max_steps) continue;
    for (std::size_t m = 0; m < sys.mode_count(); ++m) {
      Vec y = std::get<Vec>(sys.apply_mode(cur.state, m));
      if (!seen.emplace(y, true).second) continue;
      TimePoint t = plus(sys.timeline, cur.t, one_step(sys.timeline, m));
      out.push_back({State(y), t});
      queue.push_back({std::move(y), t, cur.depth + 1});
    }
  }
  return out;
}

}  // namespace

std::vector<Reached> future_witnessed(const DynamicalSystem& sys,
                                      const StateSet& s, const Horizon& h) {
  if (const auto* fs = std::get_if<FiniteSet>(&s))
    return finite_future(sys, *fs, h);
  return euclidean_future(sys, std::get<SampleSet>(s), h);
}

StateSet future(const DynamicalSystem& sys, const StateSet& s,
                const Horizon& h) {
  std::vector<Reached> reached = future_witnessed(sys, s, h);
  if (is_finite(sys.space)) {
    FiniteSet out(finite_size(sys.space));
    for (const Reached& r : reached) out.insert(std::get<std::size_t>(r.state));
    return out;
  }
  SampleSet out;
  out.grid_note = std::get<SampleSet>(s).grid_note;
  for (const Reached& r : reached) out.points.push_back(std::get<Vec>(r.state));
  std::sort(out.points.begin(), out.points.end());
  out.points.erase(std::unique(out.points.begin(), out.points.end()),
                   out.points.end());
  return out;
}

FiniteSet image_one_step(const DynamicalSystem& sys, const FiniteSet& s,
                         std::size_t mode) {
  FiniteSet out(s.universe());
  for (std::size_t i : s.elements())
    out.insert(std::get<std::size_t>(sys.apply_mode(i, mode)));
  return out;
}

Verdict is_equilibrium(const DynamicalSystem& sys, const StateSet& s,
                       const Horizon& h) {
  std::vector<Reached> reached = future_witnessed(sys, s, h);
  for (const Reached& r : reached) {
    bool inside = false;
    if (const auto* fs = std::get_if<FiniteSet>(&s)) {
      inside = fs->contains(std::get<std::size_t>(r.state));
    } else {
      const auto& pts = std::get<SampleSet>(s).points;
      for (const Vec& p : pts)
        if (p == std::get<Vec>(r.state)) {
          inside = true;
          break;
        }
    }
    if (!inside) {
      Witness w;
      w.state = r.state;
      w.time = r.time;
      w.note = "reached state outside the set";
      return Verdict::fail(w, "future(s) escapes s at " +
                                  to_string(sys.timeline, r.time));
    }
  }
  return h.exact() && is_finite(sys.space)
             ? Verdict::proved_pass("future(s) = s by exhaustive reachability")
             : Verdict::sampled_pass("future(s) = s within the horizon");
}

}  // namespace lyap
