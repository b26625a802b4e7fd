// Python bindings for the main operations: parsing systems and certificates,
// the monovariant / attractor / equilibrium checks, certificate verification
// and construction, and the quadratic (numpy) layer.
//
// Conventions at the boundary:
//  - rationals cross as fractions.Fraction (strings "p/q" and ints accepted),
//  - states are ints (finite spaces) or sequences of rationals (Euclidean),
//    and named points of a system are accepted wherever a state is,
//  - times are the file-format strings ("3" ticks, "3/2" duration, "ab" word),
//  - observable values come back as Fraction, float (square roots) or inf.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "lyapkit/errors.hpp"
#include "lyapkit/io.hpp"
#include "lyapkit/quadratic.hpp"

namespace py = pybind11;
using namespace lyap;

namespace {

Rat to_rat(py::handle h) {
  if (py::isinstance<py::float_>(h)) return rat_from_double(h.cast<double>());
  return rat_from_string(py::str(h).cast<std::string>());
}

py::object from_rat(const Rat& r) {
  static py::object fraction =
      py::module_::import("fractions").attr("Fraction");
  return fraction(rat_to_string(r));
}

std::vector<Rat> to_grid(py::handle seq) {
  std::vector<Rat> g;
  for (py::handle item : seq) g.push_back(to_rat(item));
  return g;
}

py::object from_extval(const ExtVal& v) {
  if (v.is_finite()) return from_rat(v.payload());
  return py::float_(v.to_double());
}

State to_state(py::handle h, const SystemDescription* desc) {
  if (py::isinstance<py::str>(h)) {
    if (!desc) throw py::key_error("named points need a System context");
    auto it = desc->points.find(h.cast<std::string>());
    if (it == desc->points.end())
      throw py::key_error("no point named '" + h.cast<std::string>() + "'");
    return it->second;
  }
  if (py::isinstance<py::int_>(h)) return State{h.cast<std::size_t>()};
  Vec v;
  for (py::handle item : h) v.push_back(to_rat(item));
  return State{std::move(v)};
}

py::object state_to_py(const State& x) {
  if (const auto* i = std::get_if<std::size_t>(&x)) return py::int_(*i);
  py::list out;
  for (const Rat& c : std::get<Vec>(x)) out.append(from_rat(c));
  return out;
}

std::string time_repr(const TimePoint& t) {
  if (t.is_ticks()) return std::to_string(t.tick_count());
  if (t.is_duration()) return rat_to_string(t.duration_value());
  const Word& w = t.word_value();
  if (w.empty()) return "<empty>";
  std::string s;
  for (unsigned l : w) s += static_cast<char>('a' + l);
  return s;
}

py::object witness_to_py(const Verdict& v) {
  if (!v.witness) return py::none();
  py::dict d;
  d["epsilon"] =
      v.witness->epsilon ? from_rat(*v.witness->epsilon) : py::object(py::none());
  d["state"] =
      v.witness->state ? state_to_py(*v.witness->state) : py::object(py::none());
  d["time"] = v.witness->time ? py::object(py::str(time_repr(*v.witness->time)))
                              : py::object(py::none());
  d["note"] = v.witness->note;
  return d;
}

Direction to_direction(const std::string& s) {
  if (s == "decreasing") return Direction::Decreasing;
  if (s == "increasing") return Direction::Increasing;
  throw ValidationError("direction must be 'decreasing' or 'increasing'");
}

const Observable& named_observable(const SystemDescription& d,
                                   const std::string& name) {
  auto it = d.observables.find(name);
  if (it == d.observables.end())
    throw py::key_error("no observable named '" + name + "'");
  return it->second;
}

std::string certificate_text(const SystemDescription& d,
                             const CertificateDoc& c) {
  std::ostringstream out;
  write_certificate(out, d.system, c);
  return out.str();
}

py::object doc_to_py(CertificateDoc&& doc) {
  if (auto* dc = std::get_if<DeltaCertificate>(&doc))
    return py::cast(std::move(*dc));
  return py::cast(std::move(std::get<LyapunovCertificate>(doc)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Certified stability checks for monoid-action dynamical systems: "
      "monovariants, attractors, equilibria, delta and Lyapunov certificates, "
      "and quadratic certificates for linear systems.";
  m.attr("__version__") = "0.1.0";

  // Specific exceptions registered after the base so they match first.
  py::register_exception<Error>(m, "LyapkitError", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<NotInvertibleError>(m, "NotInvertibleError",
                                             PyExc_ValueError);
  py::register_exception<NonConvergentError>(m, "NonConvergentError",
                                             PyExc_ArithmeticError);

  py::class_<Verdict>(m, "Verdict")
      .def_property_readonly(
          "outcome", [](const Verdict& v) { return to_string(v.outcome); })
      .def_property_readonly("passed", [](const Verdict& v) { return v.passed(); })
      .def_property_readonly("proved", [](const Verdict& v) { return v.proved(); })
      .def_readonly("detail", &Verdict::detail)
      .def_property_readonly("witness", &witness_to_py)
      .def("__bool__", [](const Verdict& v) { return v.passed(); })
      .def("__repr__", [](const Verdict& v) {
        std::string s = "Verdict(" + to_string(v.outcome);
        if (!v.detail.empty()) s += ": " + v.detail;
        return s + ")";
      });

  py::class_<Scope>(m, "Scope")
      .def_static("exact", &Scope::exact)
      .def_static(
          "sampled",
          [](std::uint64_t steps, unsigned states, std::uint64_t seed,
             py::object box) {
            return Scope::sampled(Horizon::steps(steps), states, seed,
                                  to_rat(box));
          },
          py::arg("steps"), py::arg("states") = 32, py::arg("seed") = 0,
          py::arg("box") = py::int_(4))
      .def("__repr__", [](const Scope& s) {
        if (s.horizon.exact()) return std::string("Scope.exact()");
        return "Scope.sampled(steps=" + std::to_string(s.horizon.max_steps) +
               ", states=" + std::to_string(s.state_samples) +
               ", seed=" + std::to_string(s.seed) +
               ", box=" + rat_to_string(s.box) + ")";
      });

  py::class_<SystemDescription>(m, "System")
      .def_static("from_text",
                  [](const std::string& text) {
                    std::istringstream in(text);
                    return load_system(in);
                  })
      .def_static("from_file", &load_system_file)
      .def_property_readonly("text",
                             [](const SystemDescription& d) {
                               std::ostringstream out;
                               write_system(out, d);
                               return out.str();
                             })
      .def_property_readonly(
          "is_finite",
          [](const SystemDescription& d) { return is_finite(d.system.space); })
      .def_property_readonly("state_count",
                             [](const SystemDescription& d) -> py::object {
                               if (!is_finite(d.system.space)) return py::none();
                               return py::int_(finite_size(d.system.space));
                             })
      .def_property_readonly(
          "timeline",
          [](const SystemDescription& d) { return d.system.timeline.to_string(); })
      .def_property_readonly("point_names",
                             [](const SystemDescription& d) {
                               std::vector<std::string> names;
                               for (const auto& [k, v] : d.points)
                                 names.push_back(k);
                               return names;
                             })
      .def_property_readonly("observable_names",
                             [](const SystemDescription& d) {
                               std::vector<std::string> names;
                               for (const auto& [k, v] : d.observables)
                                 names.push_back(k);
                               return names;
                             })
      .def("point",
           [](const SystemDescription& d, const std::string& name) {
             return state_to_py(to_state(py::str(name), &d));
           })
      .def(
          "observe",
          [](const SystemDescription& d, const std::string& obs, py::object x) {
            return from_extval(observe(named_observable(d, obs), d.system.space,
                                       to_state(x, &d)));
          },
          py::arg("observable"), py::arg("state"))
      .def(
          "evolve",
          [](const SystemDescription& d, py::object x, const std::string& t) {
            TimePoint tp = time_point_from_string(d.system.timeline, t);
            return state_to_py(d.system.evolve(to_state(x, &d), tp));
          },
          py::arg("state"), py::arg("time"))
      .def("__repr__", [](const SystemDescription& d) {
        std::string sp = is_finite(d.system.space)
                             ? "finite(" +
                                   std::to_string(finite_size(d.system.space)) +
                                   ")"
                             : "euclidean(" +
                                   std::to_string(euclidean_dim(d.system.space)) +
                                   ")";
        return "System(" + sp + ", " + d.system.timeline.to_string() + ")";
      });

  py::class_<DeltaCertificate>(m, "DeltaCertificate")
      .def_property_readonly("x_star",
                             [](const DeltaCertificate& c) {
                               return state_to_py(c.x_star);
                             })
      .def_property_readonly("grid",
                             [](const DeltaCertificate& c) {
                               py::list out;
                               for (const Rat& g : c.grid)
                                 out.append(from_rat(g));
                               return out;
                             })
      .def("delta",
           [](const DeltaCertificate& c, py::object eps) {
             return from_rat(c.delta(to_rat(eps)));
           })
      .def("text",
           [](const DeltaCertificate& c, const SystemDescription& d) {
             return certificate_text(d, CertificateDoc{c});
           })
      .def("__repr__", [](const DeltaCertificate& c) {
        return "DeltaCertificate(x_star=" + state_to_string(c.x_star) +
               ", grid points=" + std::to_string(c.grid.size()) + ")";
      });

  py::class_<LyapunovCertificate>(m, "LyapunovCertificate")
      .def_property_readonly("x_star",
                             [](const LyapunovCertificate& c) {
                               return state_to_py(c.x_star);
                             })
      .def_property_readonly("grid",
                             [](const LyapunovCertificate& c) {
                               py::list out;
                               for (const Rat& g : c.family.grid)
                                 out.append(from_rat(g));
                               return out;
                             })
      .def("a",
           [](const LyapunovCertificate& c, py::object e) {
             return from_rat(c.a(to_rat(e)));
           })
      .def("b",
           [](const LyapunovCertificate& c, py::object e) {
             return from_rat(c.b(to_rat(e)));
           })
      .def(
          "value",
          [](const LyapunovCertificate& c, const SystemDescription& d,
             py::object x) {
            Observable v = pointwise_from_levelsets(c.family);
            return from_extval(observe(v, d.system.space, to_state(x, &d)));
          },
          py::arg("system"), py::arg("state"),
          "V(x): least grid radius whose level set contains x (inf if none)")
      .def(
          "member",
          [](const LyapunovCertificate& c, const SystemDescription& d,
             py::object radius, py::object x) {
            return c.family.member(d.system.space, to_rat(radius),
                                   to_state(x, &d));
          },
          py::arg("system"), py::arg("radius"), py::arg("state"))
      .def("text",
           [](const LyapunovCertificate& c, const SystemDescription& d) {
             return certificate_text(d, CertificateDoc{c});
           })
      .def("__repr__", [](const LyapunovCertificate& c) {
        return "LyapunovCertificate(x_star=" + state_to_string(c.x_star) +
               ", grid points=" + std::to_string(c.family.grid.size()) + ")";
      });

  py::class_<Factorization>(m, "Factorization")
      .def_property_readonly("grid",
                             [](const Factorization& f) {
                               py::list out;
                               for (const Rat& g : f.grid)
                                 out.append(from_rat(g));
                               return out;
                             })
      .def("delta_plus",
           [](const Factorization& f, py::object e) {
             return from_rat(f.delta_plus(to_rat(e)));
           })
      .def("delta_minus",
           [](const Factorization& f, py::object e) {
             return from_rat(f.delta_minus(to_rat(e)));
           })
      .def("compose", &compose_factorization,
           "Collapse back to a delta certificate")
      .def("__repr__", [](const Factorization& f) {
        return "Factorization(grid points=" + std::to_string(f.grid.size()) +
               ")";
      });

  // --- certificate files ---------------------------------------------------
  m.def(
      "parse_certificate",
      [](const std::string& text, const SystemDescription& d) {
        std::istringstream in(text);
        return doc_to_py(load_certificate(in, d.system));
      },
      py::arg("text"), py::arg("system"));
  m.def(
      "load_certificate",
      [](const std::string& path, const SystemDescription& d) {
        return doc_to_py(load_certificate_file(path, d.system));
      },
      py::arg("path"), py::arg("system"));
  m.def("file_digest", &file_digest, py::arg("path"));

  // --- checks --------------------------------------------------------------
  m.def(
      "check_monovariant",
      [](const SystemDescription& d, const std::string& obs,
         const std::string& direction, const Scope& sc) {
        return check_monovariant(d.system, named_observable(d, obs),
                                 to_direction(direction), sc);
      },
      py::arg("system"), py::arg("observable"),
      py::arg("direction") = "decreasing", py::arg("scope") = Scope::exact());
  m.def(
      "check_attractor",
      [](const SystemDescription& d, py::object x, const Scope& sc) {
        return check_attractor(d.system, to_state(x, &d), sc);
      },
      py::arg("system"), py::arg("point"), py::arg("scope") = Scope::exact());
  m.def(
      "is_equilibrium",
      [](const SystemDescription& d, py::object x, py::object steps) {
        Horizon h = steps.is_none() ? Horizon::unbounded()
                                    : Horizon::steps(steps.cast<std::uint64_t>());
        State s = to_state(x, &d);
        StateSet set = is_finite(d.system.space)
                           ? StateSet{FiniteSet::singleton(
                                 finite_size(d.system.space),
                                 std::get<std::size_t>(s))}
                           : StateSet{SampleSet{{std::get<Vec>(s)}, "singleton"}};
        return is_equilibrium(d.system, set, h);
      },
      py::arg("system"), py::arg("point"), py::arg("steps") = py::none());

  // --- certificate operations ----------------------------------------------
  m.def(
      "verify_delta",
      [](const SystemDescription& d, const DeltaCertificate& c) {
        return verify_delta(d.system, c);
      },
      py::arg("system"), py::arg("certificate"));
  m.def(
      "verify_lyapunov",
      [](const SystemDescription& d, const LyapunovCertificate& c) {
        return verify_lyapunov(d.system, c);
      },
      py::arg("system"), py::arg("certificate"));
  m.def("delta_from_lyapunov", &delta_from_lyapunov, py::arg("certificate"));
  m.def(
      "converse_construct",
      [](const SystemDescription& d, const DeltaCertificate& c) {
        return converse_construct(d.system, c);
      },
      py::arg("system"), py::arg("certificate"));
  m.def(
      "factorize",
      [](const SystemDescription& d, const DeltaCertificate& c) {
        return factorize(d.system, c);
      },
      py::arg("system"), py::arg("certificate"));
  m.def("compose_factorization", &compose_factorization,
        py::arg("factorization"));
  m.def(
      "verify_factorization",
      [](const SystemDescription& d, const Factorization& f) {
        return verify_factorization(d.system, f);
      },
      py::arg("system"), py::arg("factorization"));
  m.def("check_global",
        [](const DeltaCertificate& c) { return check_global(c); });
  m.def("check_global",
        [](const LyapunovCertificate& c) { return check_global(c); });

  // --- quadratic layer -----------------------------------------------------
  m.def("solve_discrete_lyapunov", &solve_discrete_lyapunov, py::arg("a"),
        py::arg("q"), "P with A^T P A - P = -Q (spectral radius of A < 1)");
  m.def(
      "quadratic_to_lyapunov",
      [](const SystemDescription& d, const DMat& p, py::object grid,
         const Scope& sc) {
        return quadratic_to_lyapunov(d.system, p, to_grid(grid), sc);
      },
      py::arg("system"), py::arg("p"), py::arg("grid"), py::arg("scope"));
  m.def(
      "check_common_quadratic",
      [](const SystemDescription& d, const DMat& p) {
        return check_common_quadratic(d.system, p);
      },
      py::arg("system"), py::arg("p"));
}
