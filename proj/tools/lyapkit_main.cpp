#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "lyapkit/certificates.hpp"
#include "lyapkit/errors.hpp"
#include "lyapkit/io.hpp"

using namespace lyap;

namespace {

struct Options {
  std::string system_file;
  std::string certificate_file;
  std::string out_file;
  std::string horizon;
  std::string grid;
  std::string point;
  std::string observable;
  std::string direction = "decreasing";
  std::string epsilon;
  std::string radius;
  std::string box = "4";
  unsigned jobs = 1;
  unsigned samples = 64;
  unsigned resolution = 64;
  std::uint64_t seed = 0;
};

Horizon parse_horizon(const std::string& s) {
  if (s == "unbounded") return Horizon::unbounded();
  auto x = s.find('x');
  if (x != std::string::npos) {
    Rat t = rat_from_string(s.substr(0, x));
    unsigned long k = std::stoul(s.substr(x + 1));
    return Horizon::time(std::move(t), static_cast<unsigned>(k));
  }
  Rat n = rat_from_string(s);
  if (denominator(n) != 1 || n < 0)
    throw ValidationError("--horizon takes unbounded, a step count, or TxK");
  return Horizon::steps(numerator(n).convert_to<std::uint64_t>());
}

std::vector<Rat> parse_grid(const std::string& s) {
  std::vector<Rat> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(rat_from_string(item));
  if (out.empty()) throw ValidationError("--grid lists radii like 1/2,1,2");
  return out;
}

State parse_point(const SystemDescription& d, const std::string& s) {
  auto it = d.points.find(s);
  if (it != d.points.end()) return it->second;
  if (is_finite(d.system.space)) {
    Rat idx = rat_from_string(s);
    if (denominator(idx) != 1 || idx < 0 ||
        idx >= Rat(finite_size(d.system.space)))
      throw ValidationError("state index out of range: " + s);
    return State{numerator(idx).convert_to<std::size_t>()};
  }
  Vec v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(rat_from_string(item));
  if (v.size() != euclidean_dim(d.system.space))
    throw ValidationError("point needs " +
                          std::to_string(euclidean_dim(d.system.space)) +
                          " coordinates: " + s);
  return State{std::move(v)};
}

StateSet singleton_set(const StateSpace& sp, const State& x) {
  if (is_finite(sp))
    return FiniteSet::singleton(finite_size(sp), std::get<std::size_t>(x));
  return SampleSet{{std::get<Vec>(x)}, "single point"};
}

Observable pick_observable(const SystemDescription& d,
                           const std::string& name) {
  if (!name.empty()) {
    auto it = d.observables.find(name);
    if (it == d.observables.end())
      throw ValidationError("no observable named \"" + name +
                            "\" in the system file");
    return it->second;
  }
  // Default: distance to the origin (Euclidean) or to state 0 (finite).
  if (is_finite(d.system.space)) return DistanceTo{State{std::size_t{0}}};
  return DistanceTo{State{Vec(euclidean_dim(d.system.space), Rat(0))}};
}

/// Default bounded horizon for Euclidean checks invoked without --horizon.
Horizon default_horizon(const Timeline& tl) {
  if (tl.kind == TimelineKind::ContinuousLinear) return Horizon::time(8, 32);
  return Horizon::steps(16);
}

Scope scope_for_check(const Options& o, const DynamicalSystem& sys) {
  if (is_finite(sys.space) && o.horizon.empty()) return Scope::exact();
  Horizon h = o.horizon.empty() ? default_horizon(sys.timeline)
                                : parse_horizon(o.horizon);
  if (is_finite(sys.space)) return Scope::sampled(std::move(h), 0, o.seed);
  return Scope::sampled(std::move(h), o.samples, o.seed,
                        rat_from_string(o.box));
}

/// CLI flags override the scope a certificate was written with.
void apply_overrides(Scope& sc, const Options& o, const CLI::App* cmd) {
  if (!o.horizon.empty()) sc.horizon = parse_horizon(o.horizon);
  if (cmd->count("--seed")) sc.seed = o.seed;
  if (cmd->count("--samples")) sc.state_samples = o.samples;
  if (cmd->count("--box")) sc.box = rat_from_string(o.box);
}

/// Independent per-epsilon checks split across threads. Only exact scopes:
/// sampled runs salt their draws by grid position, so splitting would
/// change which points get sampled.
Verdict parallel_verify_delta(const DynamicalSystem& sys,
                              const DeltaCertificate& c, unsigned jobs) {
  if (jobs <= 1 || !c.scope.is_exact(sys.space) || c.grid.size() < 2)
    return verify_delta(sys, c);
  const unsigned n = std::min<unsigned>(jobs, c.grid.size());
  std::vector<DeltaCertificate> parts;
  for (unsigned i = 0; i < n; ++i) {
    DeltaCertificate part{c.x_star, c.delta, {}, c.scope};
    for (std::size_t k = i; k < c.grid.size(); k += n)
      part.grid.push_back(c.grid[k]);
    parts.push_back(std::move(part));
  }
  std::vector<Verdict> verdicts(n);
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < n; ++i)
    pool.emplace_back(
        [&, i] { verdicts[i] = verify_delta(sys, parts[i]); });
  for (auto& t : pool) t.join();
  Verdict out = verdicts[0];
  for (unsigned i = 1; i < n; ++i) out = out.meet(verdicts[i]);
  return out;
}

int emit_report(const Options& o, const std::string& command,
                const std::vector<std::pair<std::string, std::string>>& inputs,
                const DynamicalSystem& sys, const Verdict& v, double ms) {
  std::string json = render_report(command, inputs, sys, v, ms);
  if (!o.out_file.empty()) {
    std::ofstream out(o.out_file);
    if (!out) throw Error("cannot write " + o.out_file);
    out << json;
    std::cout << to_string(v.outcome)
              << (v.detail.empty() ? "" : ": " + v.detail) << "\n";
  } else {
    std::cout << json;
  }
  return v.passed() ? 0 : 1;
}

std::vector<std::pair<std::string, std::string>> digest_inputs(
    const Options& o) {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("system", file_digest(o.system_file));
  if (!o.certificate_file.empty())
    out.emplace_back("certificate", file_digest(o.certificate_file));
  return out;
}

int run_check(const Options& o, const std::string& kind,
              const CLI::App* cmd) {
  SystemDescription d = load_system_file(o.system_file);
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  if (kind == "monovariant") {
    Direction dir = o.direction == "increasing" ? Direction::Increasing
                                                : Direction::Decreasing;
    v = check_monovariant(d.system, pick_observable(d, o.observable), dir,
                          scope_for_check(o, d.system));
  } else if (kind == "attractor") {
    if (o.point.empty()) throw ValidationError("attractor needs --point");
    v = check_attractor(d.system, parse_point(d, o.point),
                        scope_for_check(o, d.system));
  } else if (kind == "equilibrium") {
    if (o.point.empty()) throw ValidationError("equilibrium needs --point");
    State x = parse_point(d, o.point);
    v = is_equilibrium(d.system, singleton_set(d.system.space, x),
                       scope_for_check(o, d.system).horizon);
  } else {
    if (o.certificate_file.empty())
      throw ValidationError("check " + kind + " needs --certificate");
    CertificateDoc doc = load_certificate_file(o.certificate_file, d.system);
    if (kind == "delta") {
      auto* c = std::get_if<DeltaCertificate>(&doc);
      if (!c) throw ValidationError("the file holds a lyapunov certificate");
      apply_overrides(c->scope, o, cmd);
      if (!o.grid.empty()) c->grid = parse_grid(o.grid);
      c->validate(d.system.space);
      v = parallel_verify_delta(d.system, *c, o.jobs);
    } else {
      auto* c = std::get_if<LyapunovCertificate>(&doc);
      if (!c) throw ValidationError("the file holds a delta certificate");
      apply_overrides(c->scope, o, cmd);
      v = verify_lyapunov(d.system, *c);
    }
  }
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  return emit_report(o, "check " + kind, digest_inputs(o), d.system, v, ms);
}

int run_converse(const Options& o, const CLI::App* cmd) {
  SystemDescription d = load_system_file(o.system_file);
  CertificateDoc doc = load_certificate_file(o.certificate_file, d.system);
  auto* c = std::get_if<DeltaCertificate>(&doc);
  if (!c) throw ValidationError("converse starts from a delta certificate");
  apply_overrides(c->scope, o, cmd);
  if (!o.grid.empty()) c->grid = parse_grid(o.grid);
  c->validate(d.system.space);

  const auto t0 = std::chrono::steady_clock::now();
  LyapunovCertificate built = converse_construct(d.system, *c);
  Verdict v = verify_lyapunov(d.system, built);
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  if (v.passed()) {
    std::ofstream out(o.out_file);
    if (!out) throw Error("cannot write " + o.out_file);
    write_certificate(out, d.system, built);
  }
  Options report_opts = o;
  report_opts.out_file.clear();  // the --out slot holds the certificate
  return emit_report(report_opts, "converse", digest_inputs(o), d.system, v,
                     ms);
}

int run_export(const Options& o, const std::string& what) {
  SystemDescription d = load_system_file(o.system_file);
  std::ostringstream body;
  if (what == "trajectory") {
    if (o.point.empty()) throw ValidationError("trajectory needs --point");
    Horizon h = o.horizon.empty() ? default_horizon(d.system.timeline)
                                  : parse_horizon(o.horizon);
    trajectory_csv(body, d.system, parse_point(d, o.point), h,
                   pick_observable(d, o.observable));
  } else if (what == "sublevel-raster") {
    if (o.epsilon.empty()) throw ValidationError("sublevel-raster needs --epsilon");
    sublevel_raster_csv(body, d.system.space, pick_observable(d, o.observable),
                        rat_from_string(o.epsilon), rat_from_string(o.box),
                        o.resolution);
  } else {
    if (o.point.empty() || o.radius.empty())
      throw ValidationError("ball-raster needs --point and --radius");
    ball_raster_csv(body, d.system.space, parse_point(d, o.point),
                    rat_from_string(o.radius), rat_from_string(o.box),
                    o.resolution);
  }
  if (o.out_file.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(o.out_file);
    if (!out) throw Error("cannot write " + o.out_file);
    out << body.str();
  }
  return 0;
}

void add_common(CLI::App* cmd, Options& o, bool needs_cert) {
  cmd->add_option("--system", o.system_file, "system description file")
      ->required();
  auto* cert = cmd->add_option("--certificate", o.certificate_file,
                               "certificate file");
  if (needs_cert) cert->required();
  cmd->add_option("--horizon", o.horizon,
                  "unbounded, a step count, or TxK time samples");
  cmd->add_option("--grid", o.grid, "comma-separated epsilon radii");
  cmd->add_option("--jobs", o.jobs, "worker threads for per-epsilon checks");
  cmd->add_option("--seed", o.seed, "sampling seed");
  cmd->add_option("--samples", o.samples,
                  "states drawn per check on Euclidean spaces");
  cmd->add_option("--box", o.box, "sampling box half-width");
  cmd->add_option("--out", o.out_file, "output file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov certificate toolkit"};
  app.require_subcommand(1);
  Options o;
  std::string kind, what;

  CLI::App* check = app.add_subcommand("check", "run a verification");
  check->add_option("kind", kind, "what to check")
      ->required()
      ->check(CLI::IsMember({"monovariant", "attractor", "equilibrium",
                             "delta", "lyapunov"}));
  add_common(check, o, false);
  check->add_option("--point", o.point, "state or named point");
  check->add_option("--observable", o.observable, "observable name");
  check->add_option("--direction", o.direction, "increasing or decreasing")
      ->check(CLI::IsMember({"increasing", "decreasing"}));

  CLI::App* conv =
      app.add_subcommand("converse", "build a Lyapunov certificate from delta");
  add_common(conv, o, true);
  conv->get_option("--out")->required();

  CLI::App* exp = app.add_subcommand("export", "write plot-ready CSV");
  exp->add_option("what", what, "trajectory, sublevel-raster or ball-raster")
      ->required()
      ->check(CLI::IsMember({"trajectory", "sublevel-raster", "ball-raster"}));
  add_common(exp, o, false);
  exp->add_option("--point", o.point, "start state / ball center");
  exp->add_option("--observable", o.observable, "observable name");
  exp->add_option("--epsilon", o.epsilon, "sublevel threshold");
  exp->add_option("--radius", o.radius, "ball radius");
  exp->add_option("--resolution", o.resolution, "cells per raster axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (check->parsed()) return run_check(o, kind, check);
    if (conv->parsed()) return run_converse(o, conv);
    return run_export(o, what);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
