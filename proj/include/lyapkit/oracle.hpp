#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lyapkit/system.hpp"

namespace lyap {

/// Desk-scale instance for exhaustive ground truth: at most 64 states (sets
/// are plain bitmasks) and 3 letters. The brute-force routines below work
/// on the raw tables and share no traversal code with the engine.
struct FiniteInstance {
  std::vector<std::vector<Rat>> dist;
  std::vector<std::vector<std::size_t>> letter_maps;

  std::size_t states() const { return dist.size(); }
  std::size_t letters() const { return letter_maps.size(); }
  void validate() const;
  /// Engine view: discrete timeline for one letter, free monoid otherwise.
  DynamicalSystem to_system() const;
};

/// Least fixpoint of one-step expansion starting from the given bitmask:
/// keep applying every letter to the whole mask until nothing new appears.
std::uint64_t brute_reach(const FiniteInstance& inst, std::uint64_t start);

/// Bitmask of the closed ball around a state.
std::uint64_t brute_ball(const FiniteInstance& inst, std::size_t center,
                         const Rat& radius);

/// Largest candidate radius r (distinct distances from x*, plus the
/// singleton radius below all of them) whose ball's reachable set stays
/// inside the epsilon-ball; none if even the singleton escapes.
std::optional<Rat> brute_delta_exists(const FiniteInstance& inst,
                                      std::size_t x_star, const Rat& eps);

/// Outcome of replaying the three theorems on one instance.
struct BruteReport {
  bool ok = true;
  std::size_t equilibria_found = 0;  // states certified at grid level
  std::vector<std::string> counterexamples;
};

/// For every state that is a grid-level Lyapunov equilibrium (a valid delta
/// radius exists for every candidate epsilon): assert it is a fixed point,
/// and round-trip it through the engine's certificate pipeline
/// (verify_delta, converse_construct + verify_lyapunov,
/// delta_from_lyapunov + verify_delta). Any disagreement is reported as a
/// counterexample bundle.
BruteReport brute_check_theorems(const FiniteInstance& inst);

}  // namespace lyap
