// Acceptance gate: ten end-to-end properties checked at desk scale, one
// PASS/FAIL line each. Exit status is the number of failed criteria.
//
// All randomized corpora are seeded and deterministic. Ground truth comes
// from the brute-force oracle and from independent recomputation inside this
// file, never from the code paths under test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "../support.hpp"
#include "lyapkit/certificates.hpp"
#include "lyapkit/io.hpp"
#include "lyapkit/oracle.hpp"
#include "lyapkit/quadratic.hpp"

using namespace lyap;
using testsupport::brute_delta_certificate;
using testsupport::random_instance;
using testsupport::random_invertible_pl;
using testsupport::random_metric;
using testsupport::vmax_lyapunov_certificate;

namespace {

// pinned tolerances
constexpr double kResidualTol = 1e-8;        // Lyapunov equation residual
const Rat kTrajectorySlack(1, 1000000000);   // 1e-9 monovariant slack
constexpr double kClosedFormTol = 1e-10;     // known closed forms
constexpr double kTimelineBudgetS = 10.0;
constexpr double kSemiadjBudgetS = 60.0;
constexpr double kConverseBudgetS = 300.0;

struct Criterion {
  int number;
  bool ok;
  std::string note;
  double seconds;
};

double elapsed(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// ---------------------------------------------------------------- corpus --

std::vector<FiniteInstance> shared_corpus() {
  std::mt19937_64 g(0x5eed0001);
  std::vector<FiniteInstance> out;
  out.reserve(1000);
  for (int i = 0; i < 1000; ++i)
    out.push_back(random_instance(g, 16, /*pin_zero=*/i % 2 == 0));
  return out;
}

// ------------------------------------------------------------ criterion 1 --

bool words_prefix(const Word& a, const Word& b) {
  if (a.size() > b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

std::vector<Word> all_words(unsigned alphabet, std::size_t max_len) {
  std::vector<Word> out{{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (unsigned a = 0; a < alphabet; ++a) {
        Word w = out[i];
        w.push_back(a);
        out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

Criterion criterion_timeline() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t checks = 0, failures = 0;

  // (N, +, <=) up to 64, all triples
  {
    Timeline tl = Timeline::discrete();
    const TimePoint z = zero(tl);
    for (std::uint64_t a = 0; a <= 64; ++a) {
      TimePoint ta = TimePoint::ticks(a);
      if (plus(tl, ta, z) != ta || plus(tl, z, ta) != ta) ++failures;
      for (std::uint64_t b = 0; b <= 64; ++b) {
        TimePoint tb = TimePoint::ticks(b);
        TimePoint sum = plus(tl, ta, tb);
        if (sum != TimePoint::ticks(a + b)) ++failures;        // vs arithmetic
        if (!leq(tl, ta, sum)) ++failures;                     // axiom 3
        if (leq(tl, ta, tb) != (a <= b)) ++failures;           // order oracle
        if (a <= b) {
          // axiom 4: existence, correctness and uniqueness by full scan
          TimePoint d = difference(tl, ta, tb);
          if (plus(tl, ta, d) != tb) ++failures;
          std::size_t solutions = 0;
          for (std::uint64_t c = 0; c <= 64; ++c)
            if (plus(tl, ta, TimePoint::ticks(c)) == tb) ++solutions;
          if (solutions != 1) ++failures;
        }
        for (std::uint64_t c = 0; c <= 64; ++c) {
          TimePoint tc = TimePoint::ticks(c);
          if (plus(tl, plus(tl, ta, tb), tc) != plus(tl, ta, plus(tl, tb, tc)))
            ++failures;  // axiom 2
          ++checks;
        }
      }
    }
  }

  // free word monoids, alphabets 1..3, words up to length 6
  for (unsigned k = 1; k <= 3; ++k) {
    Timeline tl = Timeline::free_monoid(k);
    const std::vector<Word> words = all_words(k, 6);
    std::vector<TimePoint> pts;
    pts.reserve(words.size());
    for (const Word& w : words) pts.push_back(TimePoint::word(w));
    const TimePoint z = zero(tl);

    for (std::size_t i = 0; i < words.size(); ++i) {
      if (plus(tl, pts[i], z) != pts[i] || plus(tl, z, pts[i]) != pts[i])
        ++failures;  // axiom 1
      for (std::size_t j = 0; j < words.size(); ++j) {
        TimePoint sum = plus(tl, pts[i], pts[j]);
        if (!leq(tl, pts[i], sum)) ++failures;  // axiom 3
        bool expect = words_prefix(words[i], words[j]);
        if (leq(tl, pts[i], pts[j]) != expect) ++failures;  // order oracle
        ++checks;
      }
    }

    // axiom 2 on every triple whose total length fits in 6 letters
    for (std::size_t i = 0; i < words.size(); ++i)
      for (std::size_t j = 0; j < words.size(); ++j) {
        if (words[i].size() + words[j].size() > 6) continue;
        for (std::size_t l = 0; l < words.size(); ++l) {
          if (words[i].size() + words[j].size() + words[l].size() > 6) continue;
          if (plus(tl, plus(tl, pts[i], pts[j]), pts[l]) !=
              plus(tl, pts[i], plus(tl, pts[j], pts[l])))
            ++failures;
          ++checks;
        }
      }

    // axiom 4 on every prefix pair, uniqueness by scanning all words
    for (std::size_t j = 0; j < words.size(); ++j)
      for (std::size_t plen = 0; plen <= words[j].size(); ++plen) {
        Word prefix(words[j].begin(), words[j].begin() + plen);
        TimePoint ta = TimePoint::word(prefix);
        TimePoint d = difference(tl, ta, pts[j]);
        if (plus(tl, ta, d) != pts[j]) ++failures;
        std::size_t solutions = 0;
        for (const TimePoint& w : pts)
          if (plus(tl, ta, w) == pts[j]) ++solutions;
        if (solutions != 1) ++failures;
        ++checks;
      }
  }

  double s = elapsed(t0);
  bool ok = failures == 0 && s < kTimelineBudgetS;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%zu law checks, %zu failures, %.2fs (budget %.0fs)", checks,
                failures, s, kTimelineBudgetS);
  return {1, ok, buf, s};
}

// ------------------------------------------------------- criteria 2 and 3 --

/// v_max formulation: sup V over every probed subset never grows in one step.
bool vmax_formulation(const DynamicalSystem& sys, const Observable& obs,
                      const FiniteInstance& inst, std::mt19937_64& g) {
  const std::size_t n = inst.states();
  std::vector<FiniteSet> probes;
  if (n <= 10) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
      FiniteSet s(n);
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1u) s.insert(i);
      probes.push_back(std::move(s));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      probes.push_back(FiniteSet::singleton(n, i));
    probes.push_back(FiniteSet::full(n));
    for (int r = 0; r < 1024; ++r) {
      FiniteSet s(n);
      for (std::size_t i = 0; i < n; ++i)
        if (rnd_below(g, 2)) s.insert(i);
      if (!s.empty()) probes.push_back(std::move(s));
    }
  }
  for (const FiniteSet& s : probes) {
    ExtVal before = v_max(obs, sys.space, s);
    for (std::size_t m = 0; m < sys.mode_count(); ++m)
      if (!(v_max(obs, sys.space, image_one_step(sys, s, m)) <= before))
        return false;
  }
  return true;
}

Criterion criterion_semiadjunction(const std::vector<FiniteInstance>& corpus) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 g(0x5eed0002);
  std::size_t disagreements = 0, passing = 0;
  for (const FiniteInstance& inst : corpus) {
    DynamicalSystem sys = inst.to_system();
    Observable obs = DistanceTo{State{std::size_t{0}}};
    bool m1 =
        check_monovariant(sys, obs, Direction::Decreasing, Scope::exact())
            .passed();
    bool m2 = check_levelset_laxcone(
                  sys, sublevel(obs, sys.space, testsupport::radius_grid(inst)),
                  Scope::exact())
                  .passed();
    bool m3 = vmax_formulation(sys, obs, inst, g);
    if (m1 != m2 || m2 != m3) ++disagreements;
    if (m1) ++passing;
  }
  double s = elapsed(t0);
  bool ok = disagreements == 0 && s < kSemiadjBudgetS &&
            passing > 0 && passing < corpus.size();
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%zu instances (%zu monovariant, %zu not), %zu disagreements, "
                "%.2fs (budget %.0fs)",
                corpus.size(), passing, corpus.size() - passing, disagreements,
                s, kSemiadjBudgetS);
  return {2, ok, buf, s};
}

Criterion criterion_attractor(const std::vector<FiniteInstance>& corpus) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t attractors = 0, counterexamples = 0;
  for (const FiniteInstance& inst : corpus) {
    DynamicalSystem sys = inst.to_system();
    for (std::size_t x = 0; x < inst.states(); ++x) {
      if (!check_attractor(sys, State{x}, Scope::exact()).passed()) continue;
      ++attractors;
      Verdict eq = is_equilibrium(sys, FiniteSet::singleton(inst.states(), x),
                                  Horizon::unbounded());
      if (!eq.proved()) ++counterexamples;
    }
  }
  double s = elapsed(t0);
  bool ok = counterexamples == 0 && attractors >= 5;  // nonvacuous corpus
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%zu attractor states found, %zu equilibrium counterexamples, "
                "%.2fs",
                attractors, counterexamples, s);
  return {3, ok, buf, s};
}

// ------------------------------------------------------- criteria 4 and 5 --

std::vector<const FiniteInstance*> pinned_half(
    const std::vector<FiniteInstance>& corpus) {
  std::vector<const FiniteInstance*> out;
  for (std::size_t i = 0; i < corpus.size(); i += 2) out.push_back(&corpus[i]);
  return out;
}

Criterion criterion_forward(const std::vector<FiniteInstance>& corpus) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t verified = 0, failures = 0;
  for (const FiniteInstance* inst : pinned_half(corpus)) {
    DynamicalSystem sys = inst->to_system();
    LyapunovCertificate lc = vmax_lyapunov_certificate(*inst);
    if (!verify_lyapunov(sys, lc).proved()) {
      ++failures;  // corpus construction must yield a verified certificate
      continue;
    }
    ++verified;
    if (!verify_delta(sys, delta_from_lyapunov(lc)).proved()) ++failures;
  }
  double s = elapsed(t0);
  bool ok = failures == 0 && verified >= 500;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%zu verified Lyapunov certificates, %zu derived-delta "
                "failures, %.2fs",
                verified, failures, s);
  return {4, ok, buf, s};
}

Criterion criterion_converse(const std::vector<FiniteInstance>& corpus) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t verified = 0, failures = 0;
  for (const FiniteInstance* inst : pinned_half(corpus)) {
    DynamicalSystem sys = inst->to_system();
    DeltaCertificate dc = brute_delta_certificate(*inst);
    if (!verify_delta(sys, dc).proved()) {
      ++failures;
      continue;
    }
    ++verified;
    LyapunovCertificate lc = converse_construct(sys, dc);
    if (!verify_lyapunov(sys, lc).proved()) ++failures;
  }
  double s = elapsed(t0);
  bool ok = failures == 0 && verified >= 500 && s < kConverseBudgetS;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%zu verified delta certificates, %zu converse failures, "
                "%.2fs (budget %.0fs)",
                verified, failures, s, kConverseBudgetS);
  return {5, ok, buf, s};
}

// ------------------------------------------------------------ criterion 6 --

Criterion criterion_factorization(const std::vector<FiniteInstance>& corpus) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t rounds = 0, mismatches = 0;
  for (const FiniteInstance* inst : pinned_half(corpus)) {
    DynamicalSystem sys = inst->to_system();
    DeltaCertificate dc = brute_delta_certificate(*inst);
    Factorization f = factorize(sys, dc);
    DeltaCertificate back = compose_factorization(f);
    for (const Rat& g : dc.grid)
      if (back.delta(g) != dc.delta(g)) ++mismatches;
    ++rounds;
  }
  double s = elapsed(t0);
  bool ok = mismatches == 0 && rounds >= 500;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%zu factorization round trips, %zu grid-point mismatches, "
                "%.2fs",
                rounds, mismatches, s);
  return {6, ok, buf, s};
}

// ------------------------------------------------------------ criterion 7 --

Criterion criterion_triangles() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 g(0x5eed0007);
  std::size_t rounds = 0, grid_points = 0, disagreements = 0;
  while (rounds < 200) {
    const std::size_t n = 3 + rnd_below(g, 8);
    StateSpace sp = FiniteMetric{random_metric(g, n)};
    const std::size_t levels = 1 + rnd_below(g, 4);
    LevelSetFamily fam = testsupport::random_extensional(g, n, levels);
    PiecewiseLinearFn b = random_invertible_pl(g);
    const State x_star{rnd_below(g, n)};
    const auto& ext = std::get<LevelSetFamily::Extensional>(fam.back);
    for (std::size_t i = 0; i < fam.grid.size(); ++i) {
      LevelSetFamily slice;
      slice.grid = {fam.grid[i]};
      slice.back = LevelSetFamily::Extensional{{ext.sets[i]}};
      bool direct =
          triangle_via_b(sp, x_star, slice, b, Scope::exact()).passed();
      bool inverse =
          triangle_via_b_inverse(sp, x_star, slice, b, Scope::exact())
              .passed();
      if (direct != inverse) ++disagreements;
      ++grid_points;
    }
    ++rounds;
  }
  double s = elapsed(t0);
  bool ok = disagreements == 0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%zu random invertible B over %zu grid points, %zu "
                "disagreements, %.2fs",
                rounds, grid_points, disagreements, s);
  return {7, ok, buf, s};
}

// ------------------------------------------------------------ criterion 8 --

double spectral_radius(const DMat& a) {
  Eigen::EigenSolver<DMat> es(a);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Criterion criterion_quadratic() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 g(0x5eed0008);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::size_t residual_bad = 0, monotone_bad = 0, delta_bad = 0,
              trajectories = 0;

  for (int round = 0; round < 100; ++round) {
    const Eigen::Index n = 1 + round % 6;
    DMat a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = entry(g);
    const double target = 0.25 + 0.70 * (round % 8) / 7.0;  // up to 0.95
    double rho = spectral_radius(a);
    if (rho > 1e-9) a *= target / rho;

    DMat q = DMat::Identity(n, n);
    DMat p = solve_discrete_lyapunov(a, q);
    if ((a.transpose() * p * a - p + q).cwiseAbs().maxCoeff() > kResidualTol)
      ++residual_bad;

    DynamicalSystem sys;
    sys.space = EuclideanSpace{static_cast<std::size_t>(n)};
    sys.timeline = Timeline::discrete();
    sys.generators = LinearMaps{{rational_matrix(a)}};
    sys.validate();
    Observable v = QuadraticFormObs{rational_matrix(p)};

    // 10 exact trajectories per matrix, 40 steps each
    for (int t = 0; t < 10; ++t) {
      Vec x(static_cast<std::size_t>(n));
      for (auto& c : x) c = rnd_dyadic(g, Rat(4));
      Rat prev = observe(v, sys.space, State{x}).payload();
      State cur{x};
      for (int step = 0; step < 40; ++step) {
        cur = sys.apply_mode(cur, 0);
        Rat now = observe(v, sys.space, cur).payload();
        if (now > prev + kTrajectorySlack) {
          ++monotone_bad;
          break;
        }
        prev = now;
      }
      ++trajectories;
    }

    // derived delta certificate, sampled check
    Scope sc = Scope::sampled(Horizon::steps(8), 32, 0x8000 + round, Rat(4));
    LyapunovCertificate lc =
        quadratic_to_lyapunov(sys, p, {Rat(1, 4), Rat(1), Rat(4)}, sc);
    if (!verify_delta(sys, delta_from_lyapunov(lc)).passed()) ++delta_bad;
  }

  double s = elapsed(t0);
  bool ok = residual_bad == 0 && monotone_bad == 0 && delta_bad == 0 &&
            trajectories >= 1000;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "100 stable matrices: %zu residuals over %g, %zu of %zu "
                "trajectories non-monotone, %zu delta rejections, %.2fs",
                residual_bad, kResidualTol, monotone_bad, trajectories,
                delta_bad, s);
  return {8, ok, buf, s};
}

// ------------------------------------------------------------ criterion 9 --

Criterion criterion_closed_forms() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t bad = 0;

  DMat p1 = solve_discrete_lyapunov(0.5 * DMat::Identity(2, 2),
                                    DMat::Identity(2, 2));
  DMat expect = (4.0 / 3.0) * DMat::Identity(2, 2);
  double err1 = (p1 - expect).cwiseAbs().maxCoeff();
  if (err1 > kClosedFormTol) ++bad;

  // P = diag(1, 4) over x -> x/2 in the plane: delta is the halving map
  DynamicalSystem sys;
  sys.space = EuclideanSpace{2};
  sys.timeline = Timeline::discrete();
  sys.generators =
      LinearMaps{{{{Rat(1, 2), Rat(0)}, {Rat(0), Rat(1, 2)}}}};
  sys.validate();
  DMat p2(2, 2);
  p2 << 1, 0, 0, 4;
  LyapunovCertificate lc = quadratic_to_lyapunov(
      sys, p2, {Rat(1), Rat(4), Rat(16)},
      Scope::sampled(Horizon::steps(6), 32, 9, Rat(4)));
  DeltaCertificate dc = delta_from_lyapunov(lc);
  double err2 = 0;
  for (double e : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    double got = rat_to_double(dc.delta(rat_from_double(e)));
    err2 = std::max(err2, std::abs(got - e / 2.0));
  }
  if (err2 > kClosedFormTol) ++bad;

  double s = elapsed(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "P error %.2e, delta error %.2e (tolerance %g), %.2fs", err1,
                err2, kClosedFormTol, s);
  return {9, bad == 0, buf, s};
}

// ----------------------------------------------------------- criterion 10 --

Criterion criterion_oracle(const std::vector<FiniteInstance>& corpus) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t reach_mismatches = 0, theorem_counterexamples = 0;
  for (const FiniteInstance& inst : corpus) {
    DynamicalSystem sys = inst.to_system();
    const std::size_t n = inst.states();
    for (std::size_t s = 0; s < n; ++s) {
      std::uint64_t mask = brute_reach(inst, std::uint64_t{1} << s);
      StateSet fut = future(sys, FiniteSet::singleton(n, s), Horizon::unbounded());
      const FiniteSet& eng = std::get<FiniteSet>(fut);
      std::uint64_t eng_mask = 0;
      for (std::size_t u = 0; u < n; ++u)
        if (eng.contains(u)) eng_mask |= std::uint64_t{1} << u;
      if (mask != eng_mask) ++reach_mismatches;
    }
    BruteReport rep = brute_check_theorems(inst);
    if (!rep.ok) theorem_counterexamples += rep.counterexamples.size();
  }
  double s = elapsed(t0);
  bool ok = reach_mismatches == 0 && theorem_counterexamples == 0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%zu instances: %zu reach mismatches, %zu theorem "
                "counterexamples, %.2fs",
                corpus.size(), reach_mismatches, theorem_counterexamples, s);
  return {10, ok, buf, s};
}

}  // namespace

int main() {
  const std::vector<FiniteInstance> corpus = shared_corpus();

  std::vector<Criterion> results;
  results.push_back(criterion_timeline());
  results.push_back(criterion_semiadjunction(corpus));
  results.push_back(criterion_attractor(corpus));
  results.push_back(criterion_forward(corpus));
  results.push_back(criterion_converse(corpus));
  results.push_back(criterion_factorization(corpus));
  results.push_back(criterion_triangles());
  results.push_back(criterion_quadratic());
  results.push_back(criterion_closed_forms());
  results.push_back(criterion_oracle(corpus));

  int failed = 0;
  for (const Criterion& c : results) {
    std::printf("%s criterion %d: %s\n", c.ok ? "PASS" : "FAIL", c.number,
                c.note.c_str());
    if (!c.ok) ++failed;
  }
  std::printf("%zu/%zu criteria passed\n", results.size() - failed,
              results.size());
  return failed;
}
