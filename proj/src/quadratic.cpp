#include "lyapkit/quadratic.hpp"

#include <cmath>

#include "lyapkit/errors.hpp"

namespace lyap {

namespace {

constexpr double kTermFloor = 1e-14;
constexpr int kMaxTerms = 100000;
constexpr int kStallWindow = 100;
constexpr double kSymTol = 1e-12;
constexpr double kSemidefTol = 1e-9;
// Relative shave separating the chord interpolants from the exact ellipsoid
// bounds; dominates eigensolver error, negligible against the 1e-10
// closed-form tolerances downstream.
constexpr double kShave = 1e-12;

void require_symmetric(const DMat& p, const char* what) {
  if (p.rows() != p.cols())
    throw ValidationError(std::string(what) + ": matrix must be square");
  double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
  if ((p - p.transpose()).cwiseAbs().maxCoeff() > kSymTol * scale)
    throw ValidationError(std::string(what) + ": matrix must be symmetric");
}

}  // namespace

DMat solve_discrete_lyapunov(const DMat& a, const DMat& q) {
  if (a.rows() != a.cols())
    throw ValidationError("state matrix must be square");
  require_symmetric(q, "right-hand side");
  if (a.rows() != q.rows())
    throw ValidationError("state matrix and right-hand side sizes differ");
  Eigen::SelfAdjointEigenSolver<DMat> qe(q);
  if (qe.eigenvalues().minCoeff() <= 0)
    throw ValidationError("right-hand side must be positive definite");

  DMat p = q;
  DMat term = q;
  double prev_norm = term.norm();
  int stalled = 0;
  for (int k = 0; k < kMaxTerms; ++k) {
    term = a.transpose() * term * a;
    double n = term.norm();
    if (n < kTermFloor) return p + term;
    if (n >= prev_norm) {
      if (++stalled >= kStallWindow)
        throw NonConvergentError(
            "series diverges: spectral radius of the state matrix is >= 1");
    } else {
      stalled = 0;
    }
    prev_norm = n;
    p += term;
  }
  throw NonConvergentError("series did not converge within the term budget");
}

std::pair<double, double> extreme_eigs(const DMat& p) {
  require_symmetric(p, "eigenvalue bounds");
  Eigen::SelfAdjointEigenSolver<DMat> es(p);
  const auto& ev = es.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

QuadraticCertificate quadratic_certificate(const DMat& p) {
  auto [lo, hi] = extreme_eigs(p);
  if (lo <= 0)
    throw ValidationError("quadratic form must be positive definite");
  return {p, lo, hi};
}

Mat rational_matrix(const DMat& m) {
  Mat out(static_cast<std::size_t>(m.rows()),
          Vec(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          rat_from_double(m(i, j));
  return out;
}

namespace {

/// Chord interpolant through the origin of e -> factor * sqrt(e), evaluated
/// at the grid, with values nudged by `relative_nudge`. Chords of a concave
/// map keep breakpoint values exact and stay below it in between, which is
/// all the grid-evaluated checks need.
PiecewiseLinearFn sqrt_chords(double factor, const std::vector<Rat>& grid,
                              double relative_nudge) {
  std::vector<Rat> xs, ys;
  for (const Rat& g : grid) {
    double y = factor * std::sqrt(rat_to_double(g)) * (1.0 + relative_nudge);
    xs.push_back(g);
    ys.push_back(rat_from_double(y));
  }
  Rat left = ys.front() / xs.front();  // chord from the origin: infimum 0
  Rat right =
      xs.size() >= 2
          ? (ys.back() - ys[ys.size() - 2]) / (xs.back() - xs[xs.size() - 2])
          : left;
  return PiecewiseLinearFn(std::move(xs), std::move(ys), std::move(left),
                           std::move(right));
}

}  // namespace

LyapunovCertificate quadratic_to_lyapunov(const DynamicalSystem& sys,
                                          const DMat& p,
                                          std::vector<Rat> grid, Scope scope) {
  QuadraticCertificate qc = quadratic_certificate(p);
  PiecewiseLinearFn a =
      sqrt_chords(1.0 / std::sqrt(qc.lambda_max), grid, -kShave);
  PiecewiseLinearFn b =
      sqrt_chords(1.0 / std::sqrt(qc.lambda_min), grid, kShave);
  LevelSetFamily fam =
      sublevel(QuadraticFormObs{rational_matrix(p)}, sys.space, grid);
  Vec origin(euclidean_dim(sys.space), Rat(0));
  LyapunovCertificate cert{State(origin), std::move(fam), std::move(a),
                           std::move(b), std::move(scope)};
  cert.validate(sys.space);
  return cert;
}

Verdict check_common_quadratic(const DynamicalSystem& sys, const DMat& p) {
  QuadraticCertificate qc = quadratic_certificate(p);
  const auto* lm = std::get_if<LinearMaps>(&sys.generators);
  if (!lm)
    throw ValidationError(
        "common quadratic check applies to switching linear systems");
  const double slack = kSemidefTol * std::max(1.0, p.cwiseAbs().maxCoeff());
  for (std::size_t mode = 0; mode < lm->mats.size(); ++mode) {
    const Mat& am = lm->mats[mode];
    const auto n = static_cast<Eigen::Index>(am.size());
    DMat a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        a(i, j) = rat_to_double(am[static_cast<std::size_t>(i)]
                                  [static_cast<std::size_t>(j)]);
    DMat drop = a.transpose() * p * a - p;
    DMat sym = (drop + drop.transpose()) / 2.0;
    Eigen::SelfAdjointEigenSolver<DMat> es(sym);
    Eigen::Index worst;
    double top = es.eigenvalues().maxCoeff(&worst);
    if (top > slack) {
      DVec v = es.eigenvectors().col(worst);
      Vec w(static_cast<std::size_t>(n));
      for (Eigen::Index i = 0; i < n; ++i)
        w[static_cast<std::size_t>(i)] = rat_from_double(v(i));
      Witness wit;
      wit.state = State(std::move(w));
      wit.time = sys.timeline.kind == TimelineKind::FreeMonoid
                     ? TimePoint::word({static_cast<unsigned>(mode)})
                     : TimePoint::ticks(1);
      wit.note = "x^T (A^T P A - P) x > 0 along this direction";
      return Verdict::fail(wit, "mode " + std::to_string(mode) +
                                    " increases the quadratic form");
    }
  }
  return Verdict::sampled_pass(
      "A_i^T P A_i - P negative semidefinite for every mode (numeric)");
}

}  // namespace lyap
