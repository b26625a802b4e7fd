#pragma once

#include <optional>
#include <string>

#include "lyapkit/space.hpp"
#include "lyapkit/timeline.hpp"

namespace lyap {

/// PROVED means the quantification over states and times was exhaustive
/// (finite systems); SAMPLED means it was horizon- and sample-bounded.
enum class Outcome { Proved, Sampled, Fail };

std::string to_string(Outcome o);

/// Replayable counterexample data; which fields are set depends on the check.
struct Witness {
  std::optional<State> state;
  std::optional<TimePoint> time;
  std::optional<Rat> epsilon;
  std::string note;
};

struct Verdict {
  Outcome outcome = Outcome::Proved;
  std::optional<Witness> witness;
  std::string detail;

  bool passed() const { return outcome != Outcome::Fail; }
  bool proved() const { return outcome == Outcome::Proved; }

  static Verdict proved_pass(std::string detail = {}) {
    return {Outcome::Proved, std::nullopt, std::move(detail)};
  }
  static Verdict sampled_pass(std::string detail = {}) {
    return {Outcome::Sampled, std::nullopt, std::move(detail)};
  }
  static Verdict fail(Witness w, std::string detail = {}) {
    return {Outcome::Fail, std::move(w), std::move(detail)};
  }

  /// Conjunction: FAIL dominates, SAMPLED degrades PROVED.
  Verdict meet(const Verdict& other) const;
};

}  // namespace lyap
