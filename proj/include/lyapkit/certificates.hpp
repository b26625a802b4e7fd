#pragma once

#include <vector>

#include "lyapkit/monovariant.hpp"

namespace lyap {

/// Lyapunov-equilibrium certificate: the claim that for every grid epsilon,
/// the forward image of B(x*, delta(epsilon)) stays inside B(x*, epsilon).
struct DeltaCertificate {
  State x_star;
  PiecewiseLinearFn delta;
  std::vector<Rat> grid;
  Scope scope;

  void validate(const StateSpace& sp) const;
};

/// Lyapunov-function certificate: a forward-decreasing level-set family
/// sandwiched between balls, B(x*, A(e)) within family(e) within
/// B(x*, B(e)), with B a bijection of the positive reals.
struct LyapunovCertificate {
  State x_star;
  LevelSetFamily family;
  PiecewiseLinearFn a;
  PiecewiseLinearFn b;
  Scope scope;

  void validate(const StateSpace& sp) const;
};

/// The two-triangle factorization of a delta cell: S1 and S2 with
/// B(x*, delta_-(e)) within S1(e), forward images of S1(e) within S2(e),
/// and S2(delta_+(e)) within B(x*, e).
struct Factorization {
  State x_star;
  PiecewiseLinearFn delta_plus;
  PiecewiseLinearFn delta_minus;
  LevelSetFamily s1;
  LevelSetFamily s2;
  std::vector<Rat> grid;
  Scope scope;
};

/// Check the delta cell under the certificate's scope. FAIL carries
/// (epsilon, escaping state, time).
Verdict verify_delta(const DynamicalSystem& sys, const DeltaCertificate& c);

/// Check forward decrease of every grid level set plus the ball sandwich.
Verdict verify_lyapunov(const DynamicalSystem& sys,
                        const LyapunovCertificate& c);

/// delta = A after B^{-1}, on the grid {B(e) | e in the family grid}; with
/// that grid the emitted certificate holds whenever the input did, because
/// delta(B(e)) = A(e) lands on a verified family radius.
DeltaCertificate delta_from_lyapunov(const LyapunovCertificate& c);

/// The canonical factorization delta_+ = Id, delta_- = delta,
/// S1 = B(x*, delta(.)), S2 = B(x*, .). Re-checks all three cells and
/// throws ValidationError if any fails.
Factorization factorize(const DynamicalSystem& sys, const DeltaCertificate& c);

/// The three cells of a factorization, checked under its scope.
Verdict verify_factorization(const DynamicalSystem& sys,
                             const Factorization& f);

/// Collapse to the outer square: delta = delta_- after delta_+.
DeltaCertificate compose_factorization(const Factorization& f);

/// The converse construction V<=(e) = future(B(x*, delta(e))). Exact
/// reachable sets on finite spaces; seeded reach clouds under a horizon on
/// Euclidean ones. With delta = Id the balls are already the family.
/// The result has A = delta and B = Id.
LyapunovCertificate converse_construct(const DynamicalSystem& sys,
                                       const DeltaCertificate& c);

/// V(x) = least grid radius whose level set contains x (+inf if none).
Observable pointwise_from_levelsets(const LevelSetFamily& fam);

/// Is the certified basin the whole space? Requires delta (respectively A)
/// to be a bijection of the positive reals: infimum 0 and unbounded image.
Verdict check_global(const DeltaCertificate& c);
Verdict check_global(const LyapunovCertificate& c);

/// fam(e) within B(x*, b(e)) on fam's grid.
Verdict triangle_via_b(const StateSpace& sp, const State& x_star,
                       const LevelSetFamily& fam, const PiecewiseLinearFn& b,
                       const Scope& sc);

/// fam(b^{-1}(e')) within B(x*, e') on the image grid {b(e)}; equivalent to
/// triangle_via_b when b is invertible.
Verdict triangle_via_b_inverse(const StateSpace& sp, const State& x_star,
                               const LevelSetFamily& fam,
                               const PiecewiseLinearFn& b, const Scope& sc);

}  // namespace lyap
