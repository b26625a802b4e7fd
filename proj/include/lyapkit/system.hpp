#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "lyapkit/space.hpp"
#include "lyapkit/timeline.hpp"
#include "lyapkit/verdict.hpp"

namespace lyap {

/// One total transition table per alphabet letter (single table on the
/// discrete timeline).
struct FiniteMaps {
  std::vector<std::vector<std::size_t>> maps;
};

/// x -> A_i x, one matrix per letter.
struct LinearMaps {
  std::vector<Mat> mats;
};

/// Two-letter control alphabet: letter 0 applies A x, letter 1 applies A x + b.
struct AffineMaps {
  Mat a;
  Vec b;
};

/// Continuous-time translation flow F_t(x) = x + v t.
struct UniformMotion {
  Vec velocity;
};

using Generators = std::variant<FiniteMaps, LinearMaps, AffineMaps, UniformMotion>;

/// A monoid action of a timeline on a metric state space, presented by its
/// generators. Immutable after validate().
struct DynamicalSystem {
  StateSpace space;
  Timeline timeline;
  Generators generators;

  /// Checks generator arity against the timeline alphabet, map totality and
  /// matrix/vector dimensions. Throws ValidationError.
  void validate() const;

  /// Number of one-step generators (0 for the continuous flow).
  std::size_t mode_count() const;

  /// One application of generator `mode`.
  State apply_mode(const State& x, std::size_t mode) const;

  /// F_t(x): word letters apply left to right (first letter acts first);
  /// discrete ticks iterate the single generator; continuous time uses the
  /// closed form.
  State evolve(const State& x, const TimePoint& t) const;
};

/// Quantification bound over the timeline. Unbounded means "all of T" and is
/// exact only on finite spaces, where reachability closes in finitely many
/// steps.
struct Horizon {
  enum class Kind { Unbounded, Steps, Time };
  Kind kind = Kind::Unbounded;
  std::uint64_t max_steps = 0;  // tick count / word length bound
  Rat max_time = 0;             // continuous bound
  unsigned samples = 0;         // time samples on [0, max_time]

  static Horizon unbounded() { return {}; }
  static Horizon steps(std::uint64_t n) {
    return {Kind::Steps, n, 0, 0};
  }
  static Horizon time(Rat t, unsigned n) {
    return {Kind::Time, 0, std::move(t), n};
  }
  bool exact() const { return kind == Kind::Unbounded; }
};

/// The time points a bounded horizon enumerates: ticks 0..n, all words of
/// length <= n, or an even rational subdivision of [0, max_time]. Throws on
/// an unbounded horizon.
std::vector<TimePoint> sample_times(const Timeline& tl, const Horizon& h);

/// Does `spent` followed by `more` still fit inside the horizon?
bool horizon_admits(const Timeline& tl, const Horizon& h,
                    const TimePoint& spent, const TimePoint& more);

/// A state together with the first time that reaches it.
struct Reached {
  State state;
  TimePoint time;
};

/// Forward orbit of `s` with reaching times. Exact breadth-first closure on
/// finite spaces when the horizon is unbounded; otherwise bounded
/// enumeration. Throws UnsupportedExactReachError for unbounded horizons on
/// Euclidean spaces.
std::vector<Reached> future_witnessed(const DynamicalSystem& sys,
                                      const StateSet& s, const Horizon& h);

/// Union of all forward images of s within the horizon (contains s: the
/// horizon always includes time zero).
StateSet future(const DynamicalSystem& sys, const StateSet& s,
                const Horizon& h);

/// P(F_m)(s): image of a finite set under one generator application.
FiniteSet image_one_step(const DynamicalSystem& sys, const FiniteSet& s,
                         std::size_t mode);

/// Is s its own future? PROVED on exact reachability, SAMPLED under a
/// bounded horizon; FAIL carries a reached state outside s and its time.
Verdict is_equilibrium(const DynamicalSystem& sys, const StateSet& s,
                       const Horizon& h);

}  // namespace lyap
