#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "lyapkit/certificates.hpp"

namespace lyap {

/// Binary64 layer: quadratic certificates for linear and switching systems.
/// Everything here is numeric and feeds SAMPLED verdicts; the exact-rational
/// core takes over once a certificate is emitted (matrices convert to exact
/// dyadic rationals, so trajectory and membership checks downstream stay
/// exact).

using DMat = Eigen::MatrixXd;
using DVec = Eigen::VectorXd;

/// P solving A^T P A - P = -Q by the convergent series sum_k A^{T k} Q A^k.
/// Q must be symmetric positive definite. Throws NonConvergentError when the
/// spectral radius of A is >= 1 (series terms stop shrinking).
DMat solve_discrete_lyapunov(const DMat& a, const DMat& q);

/// (lambda_min, lambda_max) of a symmetric matrix.
std::pair<double, double> extreme_eigs(const DMat& p);

/// A positive-definite form P together with its extreme eigenvalues.
struct QuadraticCertificate {
  DMat p;
  double lambda_min = 0;
  double lambda_max = 0;
};

/// Validates symmetry (1e-12 relative) and positive definiteness.
QuadraticCertificate quadratic_certificate(const DMat& p);

/// Exact dyadic rational copy of a floating matrix (doubles embed exactly).
Mat rational_matrix(const DMat& m);

/// Ellipsoid-to-ball sandwich for V(x) = x^T P x around the origin:
/// A(e) = sqrt(e / lambda_max) shaved a hair down and B(e) =
/// sqrt(e / lambda_min) shaved a hair up, as chord interpolants through the
/// origin over the grid, so the sampled sandwich checks hold with margin at
/// every grid radius. B is invertible by construction.
LyapunovCertificate quadratic_to_lyapunov(const DynamicalSystem& sys,
                                          const DMat& p,
                                          std::vector<Rat> grid, Scope scope);

/// Common quadratic Lyapunov check for switching linear systems: is
/// A_i^T P A_i - P negative semidefinite (1e-9 relative slack) for every
/// mode? FAIL names the mode and an eigenvector witness.
Verdict check_common_quadratic(const DynamicalSystem& sys, const DMat& p);

}  // namespace lyap
