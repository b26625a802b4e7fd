#include "lyapkit/io.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "lyapkit/errors.hpp"

namespace lyap {
namespace {

struct Tok {
  std::string text;
  int line = 0;
  int col = 0;
};
using TokLine = std::vector<Tok>;

std::vector<TokLine> tokenize(std::istream& in) {
  std::vector<TokLine> out;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    TokLine line;
    std::size_t i = 0;
    while (i < raw.size()) {
      if (std::isspace(static_cast<unsigned char>(raw[i]))) {
        ++i;
        continue;
      }
      if (raw[i] == '#') break;
      std::size_t j = i;
      while (j < raw.size() &&
             !std::isspace(static_cast<unsigned char>(raw[j])) && raw[j] != '#')
        ++j;
      line.push_back({raw.substr(i, j - i), lineno, static_cast<int>(i) + 1});
      i = j;
    }
    if (!line.empty()) out.push_back(std::move(line));
  }
  return out;
}

[[noreturn]] void fail(const Tok& t, const std::string& msg) {
  throw ParseError(msg + " (near \"" + t.text + "\")", t.line, t.col);
}

struct Cursor {
  const std::vector<TokLine>* lines;
  std::size_t pos = 0;

  bool done() const { return pos >= lines->size(); }
  const TokLine& peek() const { return (*lines)[pos]; }
  const TokLine& next() { return (*lines)[pos++]; }
  bool at(const char* head) const { return !done() && peek()[0].text == head; }
  [[noreturn]] void fail_eof(const std::string& msg) const {
    const Tok& last = lines->empty() ? Tok{"", 1, 1} : lines->back().back();
    throw ParseError(msg + " (file ended)", last.line, last.col);
  }
};

Rat parse_rat(const Tok& t) {
  try {
    return rat_from_string(t.text);
  } catch (const std::exception& e) {
    fail(t, e.what());
  }
}

// Quadratic sections only: a decimal literal reads as its exact dyadic.
Rat parse_number(const Tok& t) {
  if (t.text.find_first_of(".eE") != std::string::npos &&
      t.text.find('/') == std::string::npos) {
    char* end = nullptr;
    double v = std::strtod(t.text.c_str(), &end);
    if (end == t.text.c_str() || *end != '\0') fail(t, "bad numeric literal");
    return rat_from_double(v);
  }
  return parse_rat(t);
}

std::uint64_t parse_u64(const Tok& t) {
  Rat r = parse_rat(t);
  if (denominator(r) != 1 || r < 0) fail(t, "expected a nonnegative integer");
  return numerator(r).convert_to<std::uint64_t>();
}

std::size_t parse_index(const Tok& t, std::size_t bound,
                        const std::string& what) {
  std::uint64_t v = parse_u64(t);
  if (v >= bound) fail(t, what + " out of range");
  return static_cast<std::size_t>(v);
}

void expect_len(const TokLine& l, std::size_t n, const std::string& shape) {
  if (l.size() != n) fail(l[0], "expected \"" + shape + "\"");
}

Vec parse_row(const TokLine& l, std::size_t want, bool numeric) {
  if (l.size() != want + 1)
    fail(l[0], "expected " + std::to_string(want) + " entries");
  Vec row;
  for (std::size_t i = 1; i < l.size(); ++i)
    row.push_back(numeric ? parse_number(l[i]) : parse_rat(l[i]));
  return row;
}

Mat parse_matrix_block(Cursor& c, std::size_t rows, std::size_t cols,
                       bool numeric) {
  Mat m;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!c.at("row")) c.fail_eof("expected a \"row\" line");
    m.push_back(parse_row(c.next(), cols, numeric));
  }
  return m;
}

State parse_state(const StateSpace& sp, const TokLine& l, std::size_t from,
                  const std::map<std::string, State>* points) {
  if (from >= l.size()) fail(l.back(), "expected a state");
  if (points) {
    auto it = points->find(l[from].text);
    if (it != points->end()) {
      if (l.size() != from + 1) fail(l[from + 1], "trailing tokens after point name");
      return it->second;
    }
  }
  if (is_finite(sp)) {
    if (l.size() != from + 1) fail(l[from], "finite states are one index");
    return State{parse_index(l[from], finite_size(sp), "state index")};
  }
  const std::size_t dim = euclidean_dim(sp);
  if (l.size() != from + dim)
    fail(l[from], "expected " + std::to_string(dim) + " coordinates");
  Vec v;
  for (std::size_t i = from; i < l.size(); ++i) v.push_back(parse_rat(l[i]));
  return State{std::move(v)};
}

std::vector<ExtVal> parse_extvals(const TokLine& l, std::size_t from) {
  std::vector<ExtVal> out;
  for (std::size_t i = from; i < l.size(); ++i) {
    if (l[i].text == "inf") {
      out.push_back(ExtVal::infinity());
    } else if (l[i].text == "sqrt") {
      if (++i >= l.size()) fail(l.back(), "sqrt needs a radicand");
      out.push_back(ExtVal::sqrt_of(parse_rat(l[i])));
    } else {
      out.push_back(ExtVal::finite(parse_rat(l[i])));
    }
  }
  return out;
}

constexpr const char* kPlShape = "point <x> <y> ... / left <s> / right <s>";

PiecewiseLinearFn parse_pl(Cursor& c) {
  const Tok head = c.next()[0];
  std::vector<Rat> xs, ys;
  std::optional<Rat> left, right;
  while (!c.done()) {
    const std::string& kw = c.peek()[0].text;
    if (kw == "point") {
      const TokLine& l = c.next();
      expect_len(l, 3, "point <x> <y>");
      xs.push_back(parse_rat(l[1]));
      ys.push_back(parse_rat(l[2]));
    } else if (kw == "left" || kw == "right") {
      const TokLine& l = c.next();
      expect_len(l, 2, kw + " <slope>");
      (kw == "left" ? left : right) = parse_rat(l[1]);
    } else {
      break;
    }
  }
  if (xs.empty() || !left || !right)
    fail(head, std::string("incomplete piecewise-linear block; need ") +
                   kPlShape);
  try {
    return PiecewiseLinearFn(std::move(xs), std::move(ys), *left, *right);
  } catch (const std::exception& e) {
    fail(head, e.what());
  }
}

Observable parse_observable_body(Cursor& c, const TokLine& l, std::size_t from,
                                 const StateSpace& sp,
                                 const std::map<std::string, State>* points) {
  if (from >= l.size()) fail(l.back(), "expected an observable kind");
  const std::string& kind = l[from].text;
  if (kind == "distance")
    return DistanceTo{parse_state(sp, l, from + 1, points)};
  if (kind == "coordinate") {
    expect_len(l, from + 2, "coordinate <index>");
    return CoordinateObs{parse_index(l[from + 1], euclidean_dim(sp),
                                     "coordinate index")};
  }
  if (kind == "quadratic") {
    expect_len(l, from + 1, "quadratic");
    const std::size_t d = euclidean_dim(sp);
    return QuadraticFormObs{parse_matrix_block(c, d, d, /*numeric=*/true)};
  }
  if (kind == "table") {
    auto vals = parse_extvals(l, from + 1);
    if (vals.size() != finite_size(sp))
      fail(l[from], "table needs one value per state");
    return TableObs{std::move(vals)};
  }
  fail(l[from], "unknown observable kind");
}

Scope parse_scope(Cursor& c) {
  const TokLine& head = c.next();
  if (head.size() == 2 && head[1].text == "exact") return Scope::exact();
  if (head.size() != 2 || head[1].text != "sampled")
    fail(head[0], "expected \"scope exact\" or \"scope sampled\"");
  Scope sc;
  while (!c.done()) {
    const std::string& kw = c.peek()[0].text;
    if (kw == "horizon") {
      const TokLine& l = c.next();
      if (l.size() == 2 && l[1].text == "unbounded") {
        sc.horizon = Horizon::unbounded();
      } else if (l.size() == 3 && l[1].text == "steps") {
        sc.horizon = Horizon::steps(parse_u64(l[2]));
      } else if (l.size() == 4 && l[1].text == "time") {
        sc.horizon = Horizon::time(parse_rat(l[2]),
                                   static_cast<unsigned>(parse_u64(l[3])));
      } else {
        fail(l[0], "expected horizon unbounded | steps <n> | time <T> <k>");
      }
    } else if (kw == "states") {
      const TokLine& l = c.next();
      expect_len(l, 2, "states <n>");
      sc.state_samples = static_cast<unsigned>(parse_u64(l[1]));
    } else if (kw == "seed") {
      const TokLine& l = c.next();
      expect_len(l, 2, "seed <n>");
      sc.seed = parse_u64(l[1]);
    } else if (kw == "box") {
      const TokLine& l = c.next();
      expect_len(l, 2, "box <r>");
      sc.box = parse_rat(l[1]);
    } else {
      break;
    }
  }
  return sc;
}

LevelSetFamily parse_family(Cursor& c, const DynamicalSystem& sys,
                            const std::vector<Rat>& grid) {
  const TokLine head = c.next();
  if (head.size() < 2) fail(head[0], "expected a family backing");
  const std::string& kind = head[1].text;
  LevelSetFamily fam;
  fam.grid = grid;
  if (kind == "balls") {
    LevelSetFamily::BallPred b;
    if (!c.at("center")) c.fail_eof("family balls needs a center line");
    b.center = parse_state(sys.space, c.next(), 1, nullptr);
    if (c.at("scale")) b.scale = parse_pl(c);
    fam.back = std::move(b);
  } else if (kind == "sublevel") {
    fam.back = LevelSetFamily::SublevelPred{
        parse_observable_body(c, head, 2, sys.space, nullptr)};
  } else if (kind == "extensional") {
    LevelSetFamily::Extensional ext;
    const std::size_t n = finite_size(sys.space);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (!c.at("level")) c.fail_eof("expected one level line per grid radius");
      const TokLine& l = c.next();
      FiniteSet s(n);
      for (std::size_t i = 1; i < l.size(); ++i)
        s.insert(parse_index(l[i], n, "state index"));
      ext.sets.push_back(std::move(s));
    }
    fam.back = std::move(ext);
  } else if (kind == "cloud") {
    LevelSetFamily::SampleCloud cloud;
    const std::size_t dim = euclidean_dim(sys.space);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (!c.at("level")) c.fail_eof("expected one level block per grid radius");
      c.next();
      std::vector<std::pair<Vec, TimePoint>> pts;
      while (c.at("sample")) {
        const TokLine& l = c.next();
        if (l.size() != dim + 2)
          fail(l[0], "expected sample <time> <" + std::to_string(dim) +
                         " coordinates>");
        TimePoint t;
        try {
          t = time_point_from_string(sys.timeline, l[1].text);
        } catch (const std::exception& e) {
          fail(l[1], e.what());
        }
        Vec v;
        for (std::size_t i = 2; i < l.size(); ++i)
          v.push_back(parse_rat(l[i]));
        pts.emplace_back(std::move(v), std::move(t));
      }
      cloud.points.push_back(std::move(pts));
    }
    fam.back = std::move(cloud);
  } else {
    fail(head[1], "unknown family backing");
  }
  try {
    fam.validate(sys.space);
  } catch (const std::exception& e) {
    fail(head[0], e.what());
  }
  return fam;
}

// ---- writers ----

void write_state_tokens(std::ostream& out, const StateSpace& sp,
                        const State& x) {
  if (is_finite(sp)) {
    out << std::get<std::size_t>(x);
    return;
  }
  const Vec& v = std::get<Vec>(x);
  for (std::size_t i = 0; i < v.size(); ++i)
    out << (i ? " " : "") << rat_to_string(v[i]);
}

void write_pl(std::ostream& out, const std::string& name,
              const PiecewiseLinearFn& f) {
  out << name << "\n";
  for (std::size_t i = 0; i < f.xs().size(); ++i)
    out << "  point " << rat_to_string(f.xs()[i]) << " "
        << rat_to_string(f.ys()[i]) << "\n";
  out << "  left " << rat_to_string(f.left_slope()) << "\n";
  out << "  right " << rat_to_string(f.right_slope()) << "\n";
}

void write_scope(std::ostream& out, const Scope& sc) {
  if (sc.horizon.exact() && sc.state_samples == 0) {
    out << "scope exact\n";
    return;
  }
  out << "scope sampled\n";
  switch (sc.horizon.kind) {
    case Horizon::Kind::Unbounded:
      out << "  horizon unbounded\n";
      break;
    case Horizon::Kind::Steps:
      out << "  horizon steps " << sc.horizon.max_steps << "\n";
      break;
    case Horizon::Kind::Time:
      out << "  horizon time " << rat_to_string(sc.horizon.max_time) << " "
          << sc.horizon.samples << "\n";
      break;
  }
  out << "  states " << sc.state_samples << "\n";
  out << "  seed " << sc.seed << "\n";
  out << "  box " << rat_to_string(sc.box) << "\n";
}

std::string extval_tokens(const ExtVal& v) {
  switch (v.kind()) {
    case ExtVal::Kind::Finite:
      return rat_to_string(v.payload());
    case ExtVal::Kind::Sqrt:
      return "sqrt " + rat_to_string(v.payload());
    case ExtVal::Kind::Infinite:
      return "inf";
  }
  return {};
}

void write_observable_body(std::ostream& out, const StateSpace& sp,
                           const Observable& obs) {
  if (const auto* d = std::get_if<DistanceTo>(&obs)) {
    out << "distance ";
    write_state_tokens(out, sp, d->center);
    out << "\n";
  } else if (const auto* q = std::get_if<QuadraticFormObs>(&obs)) {
    out << "quadratic\n";
    for (const Vec& row : q->p) {
      out << "  row";
      for (const Rat& v : row) out << " " << rat_to_string(v);
      out << "\n";
    }
  } else if (const auto* co = std::get_if<CoordinateObs>(&obs)) {
    out << "coordinate " << co->index << "\n";
  } else if (const auto* t = std::get_if<TableObs>(&obs)) {
    out << "table";
    for (const ExtVal& v : t->values) out << " " << extval_tokens(v);
    out << "\n";
  } else {
    throw ValidationError(
        "derived level-set observables have no file form; export the family "
        "instead");
  }
}

void write_family(std::ostream& out, const DynamicalSystem& sys,
                  const LevelSetFamily& fam) {
  if (const auto* b = std::get_if<LevelSetFamily::BallPred>(&fam.back)) {
    out << "family balls\n";
    out << "  center ";
    write_state_tokens(out, sys.space, b->center);
    out << "\n";
    if (b->scale) write_pl(out, "scale", *b->scale);
  } else if (const auto* s =
                 std::get_if<LevelSetFamily::SublevelPred>(&fam.back)) {
    out << "family sublevel ";
    write_observable_body(out, sys.space, s->obs);
  } else if (const auto* e =
                 std::get_if<LevelSetFamily::Extensional>(&fam.back)) {
    out << "family extensional\n";
    for (const FiniteSet& set : e->sets) {
      out << "level";
      for (std::size_t i : set.elements()) out << " " << i;
      out << "\n";
    }
  } else if (const auto* cl =
                 std::get_if<LevelSetFamily::SampleCloud>(&fam.back)) {
    out << "family cloud\n";
    for (const auto& level : cl->points) {
      out << "level\n";
      for (const auto& [v, t] : level) {
        out << "  sample " << to_string(sys.timeline, t);
        for (const Rat& x : v) out << " " << rat_to_string(x);
        out << "\n";
      }
    }
  }
}

void write_grid(std::ostream& out, const std::vector<Rat>& grid) {
  out << "grid";
  for (const Rat& g : grid) out << " " << rat_to_string(g);
  out << "\n";
}

std::string csv_num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string csv_value(const ExtVal& v) {
  return v.is_infinite() ? "inf" : csv_num(v.to_double());
}

void raster(std::ostream& out, const StateSpace& sp,
            const std::function<bool(const Vec&)>& member, const Rat& box,
            unsigned resolution) {
  if (is_finite(sp))
    throw ValidationError("rasters need a euclidean space of dimension <= 2");
  const std::size_t dim = euclidean_dim(sp);
  if (dim == 0 || dim > 2)
    throw ValidationError("rasters need a euclidean space of dimension <= 2");
  if (resolution == 0) throw ValidationError("raster grid is empty");
  if (box <= 0) throw ValidationError("raster box must be positive");
  out << "x,y,member\n";
  auto coord = [&](unsigned i) {
    return -box + 2 * box * Rat(i) / Rat(resolution);
  };
  for (unsigned i = 0; i <= resolution; ++i) {
    for (unsigned j = 0; j <= resolution; ++j) {
      Vec p{coord(i)};
      Rat y = 0;
      if (dim == 2) {
        y = coord(j);
        p.push_back(y);
      }
      out << csv_num(rat_to_double(p[0])) << "," << csv_num(rat_to_double(y))
          << "," << (member(p) ? 1 : 0) << "\n";
      if (dim == 1) break;  // no y axis to sweep
    }
  }
}

}  // namespace

SystemDescription load_system(std::istream& in) {
  auto lines = tokenize(in);
  Cursor c{&lines};
  SystemDescription d;

  if (!c.at("space")) c.fail_eof("a system file starts with a space line");
  {
    const TokLine& l = c.next();
    expect_len(l, 3, "space finite <n> | space euclidean <d>");
    if (l[1].text == "finite") {
      std::uint64_t n = parse_u64(l[2]);
      if (n == 0) fail(l[2], "a finite space needs at least one state");
      FiniteMetric m;
      m.dist = parse_matrix_block(c, n, n, /*numeric=*/false);
      try {
        m.validate();
      } catch (const std::exception& e) {
        fail(l[1], e.what());
      }
      d.system.space = std::move(m);
    } else if (l[1].text == "euclidean") {
      std::uint64_t dim = parse_u64(l[2]);
      if (dim == 0) fail(l[2], "dimension must be positive");
      d.system.space = EuclideanSpace{static_cast<std::size_t>(dim)};
    } else {
      fail(l[1], "space kind is finite or euclidean");
    }
  }

  if (!c.at("timeline")) c.fail_eof("expected a timeline line");
  {
    const TokLine& l = c.next();
    if (l.size() == 2 && l[1].text == "discrete") {
      d.system.timeline = {TimelineKind::DiscreteLinear, 0};
    } else if (l.size() == 2 && l[1].text == "continuous") {
      d.system.timeline = {TimelineKind::ContinuousLinear, 0};
    } else if (l.size() == 3 && l[1].text == "words") {
      d.system.timeline = {TimelineKind::FreeMonoid,
                           static_cast<unsigned>(parse_u64(l[2]))};
    } else {
      fail(l[0], "expected timeline discrete | continuous | words <k>");
    }
  }

  std::optional<FiniteMaps> fmaps;
  std::optional<LinearMaps> lmaps;
  std::optional<AffineMaps> amaps;
  std::optional<UniformMotion> motion;
  bool saw_generator = false;

  while (!c.done()) {
    const std::string kw = c.peek()[0].text;
    if (kw == "map") {
      const TokLine& l = c.next();
      const std::size_t n = finite_size(d.system.space);
      if (l.size() != n + 1) fail(l[0], "a map needs one image per state");
      std::vector<std::size_t> m;
      for (std::size_t i = 1; i < l.size(); ++i)
        m.push_back(parse_index(l[i], n, "state index"));
      if (!fmaps) fmaps.emplace();
      fmaps->maps.push_back(std::move(m));
      saw_generator = true;
    } else if (kw == "matrix") {
      const TokLine& l = c.next();
      expect_len(l, 1, "matrix");
      const std::size_t dim = euclidean_dim(d.system.space);
      if (!lmaps) lmaps.emplace();
      lmaps->mats.push_back(parse_matrix_block(c, dim, dim, false));
      saw_generator = true;
    } else if (kw == "affine") {
      const TokLine& head = c.next();
      expect_len(head, 1, "affine");
      const std::size_t dim = euclidean_dim(d.system.space);
      AffineMaps a;
      a.a = parse_matrix_block(c, dim, dim, false);
      if (!c.at("offset")) c.fail_eof("affine needs an offset line");
      a.b = parse_row(c.next(), dim, false);
      amaps = std::move(a);
      saw_generator = true;
    } else if (kw == "velocity") {
      const TokLine& l = c.next();
      motion = UniformMotion{
          parse_row(l, euclidean_dim(d.system.space), false)};
      saw_generator = true;
    } else if (kw == "point") {
      const TokLine& l = c.next();
      if (l.size() < 3) fail(l[0], "expected point <name> <state>");
      d.points[l[1].text] = parse_state(d.system.space, l, 2, nullptr);
    } else if (kw == "observable") {
      const TokLine& l = c.next();
      if (l.size() < 3) fail(l[0], "expected observable <name> <kind> ...");
      d.observables[l[1].text] =
          parse_observable_body(c, l, 2, d.system.space, &d.points);
    } else {
      fail(c.peek()[0], "unknown directive");
    }
  }

  const int kinds = (fmaps ? 1 : 0) + (lmaps ? 1 : 0) + (amaps ? 1 : 0) +
                    (motion ? 1 : 0);
  if (!saw_generator || kinds != 1) {
    Tok at = lines.empty() ? Tok{"", 1, 1} : lines.back().back();
    throw ParseError("a system declares exactly one generator family", at.line,
                     at.col);
  }
  if (fmaps) d.system.generators = std::move(*fmaps);
  if (lmaps) d.system.generators = std::move(*lmaps);
  if (amaps) d.system.generators = std::move(*amaps);
  if (motion) d.system.generators = std::move(*motion);

  d.system.validate();
  return d;
}

SystemDescription load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return load_system(in);
}

void write_system(std::ostream& out, const SystemDescription& d) {
  const StateSpace& sp = d.system.space;
  if (is_finite(sp)) {
    const auto& m = std::get<FiniteMetric>(sp);
    out << "space finite " << m.size() << "\n";
    for (const auto& row : m.dist) {
      out << "  row";
      for (const Rat& v : row) out << " " << rat_to_string(v);
      out << "\n";
    }
  } else {
    out << "space euclidean " << euclidean_dim(sp) << "\n";
  }
  switch (d.system.timeline.kind) {
    case TimelineKind::DiscreteLinear:
      out << "timeline discrete\n";
      break;
    case TimelineKind::ContinuousLinear:
      out << "timeline continuous\n";
      break;
    case TimelineKind::FreeMonoid:
      out << "timeline words " << d.system.timeline.alphabet_size << "\n";
      break;
  }
  if (const auto* f = std::get_if<FiniteMaps>(&d.system.generators)) {
    for (const auto& m : f->maps) {
      out << "map";
      for (std::size_t s : m) out << " " << s;
      out << "\n";
    }
  } else if (const auto* l = std::get_if<LinearMaps>(&d.system.generators)) {
    for (const Mat& mat : l->mats) {
      out << "matrix\n";
      for (const Vec& row : mat) {
        out << "  row";
        for (const Rat& v : row) out << " " << rat_to_string(v);
        out << "\n";
      }
    }
  } else if (const auto* a = std::get_if<AffineMaps>(&d.system.generators)) {
    out << "affine\n";
    for (const Vec& row : a->a) {
      out << "  row";
      for (const Rat& v : row) out << " " << rat_to_string(v);
      out << "\n";
    }
    out << "  offset";
    for (const Rat& v : a->b) out << " " << rat_to_string(v);
    out << "\n";
  } else if (const auto* u = std::get_if<UniformMotion>(&d.system.generators)) {
    out << "velocity";
    for (const Rat& v : u->velocity) out << " " << rat_to_string(v);
    out << "\n";
  }
  for (const auto& [name, x] : d.points) {
    out << "point " << name << " ";
    write_state_tokens(out, sp, x);
    out << "\n";
  }
  for (const auto& [name, obs] : d.observables) {
    out << "observable " << name << " ";
    write_observable_body(out, sp, obs);
  }
}

CertificateDoc load_certificate(std::istream& in, const DynamicalSystem& sys) {
  auto lines = tokenize(in);
  Cursor c{&lines};
  if (!c.at("certificate"))
    c.fail_eof("a certificate file starts with a certificate line");
  const TokLine head = c.next();
  expect_len(head, 2, "certificate delta | certificate lyapunov");
  const bool is_delta = head[1].text == "delta";
  if (!is_delta && head[1].text != "lyapunov")
    fail(head[1], "certificate kind is delta or lyapunov");

  std::optional<State> x_star;
  std::vector<Rat> grid;
  std::optional<PiecewiseLinearFn> delta, a, b;
  std::optional<LevelSetFamily> family;
  Scope scope = Scope::exact();

  while (!c.done()) {
    const std::string& kw = c.peek()[0].text;
    if (kw == "x-star") {
      x_star = parse_state(sys.space, c.next(), 1, nullptr);
    } else if (kw == "grid") {
      const TokLine& l = c.next();
      if (l.size() < 2) fail(l[0], "grid needs at least one radius");
      grid.clear();
      for (std::size_t i = 1; i < l.size(); ++i)
        grid.push_back(parse_rat(l[i]));
    } else if (kw == "delta" || kw == "a" || kw == "b") {
      auto& slot = kw == "delta" ? delta : (kw == "a" ? a : b);
      slot = parse_pl(c);
    } else if (kw == "family") {
      if (grid.empty())
        fail(c.peek()[0], "the grid line must precede the family");
      family = parse_family(c, sys, grid);
    } else if (kw == "scope") {
      scope = parse_scope(c);
    } else {
      fail(c.peek()[0], "unknown directive");
    }
  }

  const Tok at = lines.back().back();
  if (!x_star) throw ParseError("missing x-star", at.line, at.col);
  if (grid.empty()) throw ParseError("missing grid", at.line, at.col);
  try {
    if (is_delta) {
      if (!delta) throw ParseError("missing delta block", at.line, at.col);
      DeltaCertificate out{std::move(*x_star), std::move(*delta),
                           std::move(grid), std::move(scope)};
      out.validate(sys.space);
      return out;
    }
    if (!a || !b) throw ParseError("missing a or b block", at.line, at.col);
    if (!family) throw ParseError("missing family block", at.line, at.col);
    LyapunovCertificate out{std::move(*x_star), std::move(*family),
                            std::move(*a), std::move(*b), std::move(scope)};
    out.validate(sys.space);
    return out;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(e.what(), at.line, at.col);
  }
}

CertificateDoc load_certificate_file(const std::string& path,
                                     const DynamicalSystem& sys) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return load_certificate(in, sys);
}

void write_certificate(std::ostream& out, const DynamicalSystem& sys,
                       const DeltaCertificate& c) {
  out << "certificate delta\n";
  out << "x-star ";
  write_state_tokens(out, sys.space, c.x_star);
  out << "\n";
  write_grid(out, c.grid);
  write_pl(out, "delta", c.delta);
  write_scope(out, c.scope);
}

void write_certificate(std::ostream& out, const DynamicalSystem& sys,
                       const LyapunovCertificate& c) {
  out << "certificate lyapunov\n";
  out << "x-star ";
  write_state_tokens(out, sys.space, c.x_star);
  out << "\n";
  write_grid(out, c.family.grid);
  write_pl(out, "a", c.a);
  write_pl(out, "b", c.b);
  write_family(out, sys, c.family);
  write_scope(out, c.scope);
}

void write_certificate(std::ostream& out, const DynamicalSystem& sys,
                       const CertificateDoc& c) {
  std::visit([&](const auto& cert) { write_certificate(out, sys, cert); }, c);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0')
     << fnv1a64(buf.str());
  return os.str();
}

std::string render_report(
    const std::string& command,
    const std::vector<std::pair<std::string, std::string>>& inputs,
    const DynamicalSystem& sys, const Verdict& v, double total_ms) {
  nlohmann::ordered_json doc;
  doc["command"] = command;
  nlohmann::ordered_json in = nlohmann::ordered_json::object();
  for (const auto& [name, digest] : inputs) in[name] = digest;
  doc["inputs"] = in;
  doc["verdict"] = to_string(v.outcome);
  doc["detail"] = v.detail;
  nlohmann::ordered_json ws = nlohmann::ordered_json::array();
  if (v.witness) {
    nlohmann::ordered_json w = nlohmann::ordered_json::object();
    if (v.witness->epsilon) w["epsilon"] = rat_to_string(*v.witness->epsilon);
    if (v.witness->state) w["state"] = state_to_string(*v.witness->state);
    if (v.witness->time)
      w["time"] = to_string(sys.timeline, *v.witness->time);
    w["note"] = v.witness->note;
    ws.push_back(w);
  }
  doc["witnesses"] = ws;
  doc["timings"] = {{"total_ms", total_ms}};
  return doc.dump(2) + "\n";
}

void trajectory_csv(std::ostream& out, const DynamicalSystem& sys,
                    const State& start, const Horizon& h,
                    const Observable& obs) {
  if (h.exact())
    throw ValidationError("trajectory export needs a bounded horizon");
  std::string head = "step";
  if (is_finite(sys.space)) {
    head += ",state";
  } else {
    for (std::size_t i = 0; i < euclidean_dim(sys.space); ++i)
      head += ",x" + std::to_string(i);
  }
  out << head << ",value\n";
  for (const TimePoint& t : sample_times(sys.timeline, h)) {
    State xt = sys.evolve(start, t);
    out << to_string(sys.timeline, t) << ",";
    if (is_finite(sys.space)) {
      out << std::get<std::size_t>(xt);
    } else {
      const Vec& v = std::get<Vec>(xt);
      for (std::size_t i = 0; i < v.size(); ++i)
        out << (i ? "," : "") << csv_num(rat_to_double(v[i]));
    }
    out << "," << csv_value(observe(obs, sys.space, xt)) << "\n";
  }
}

void sublevel_raster_csv(std::ostream& out, const StateSpace& sp,
                         const Observable& obs, const Rat& eps, const Rat& box,
                         unsigned resolution) {
  raster(
      out, sp,
      [&](const Vec& p) {
        return observe(obs, sp, State{p}) <= ExtVal::finite(eps);
      },
      box, resolution);
}

void ball_raster_csv(std::ostream& out, const StateSpace& sp,
                     const State& center, const Rat& radius, const Rat& box,
                     unsigned resolution) {
  raster(out, sp,
         [&](const Vec& p) { return distance_leq(sp, center, State{p}, radius); },
         box, resolution);
}

}  // namespace lyap
