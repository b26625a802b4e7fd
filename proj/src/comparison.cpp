#include "lyapkit/comparison.hpp"

#include <algorithm>
#include <sstream>

#include "lyapkit/errors.hpp"

namespace lyap {

namespace {

Rat seg_slope(const Rat& x0, const Rat& y0, const Rat& x1, const Rat& y1) {
  return (y1 - y0) / (x1 - x0);
}

}  // namespace

PiecewiseLinearFn::PiecewiseLinearFn(std::vector<Rat> xs, std::vector<Rat> ys,
                                     Rat left_slope, Rat right_slope)
    : xs_(std::move(xs)),
      ys_(std::move(ys)),
      left_slope_(std::move(left_slope)),
      right_slope_(std::move(right_slope)) {
  validate();
  normalize();
}

void PiecewiseLinearFn::validate() const {
  if (xs_.empty() || xs_.size() != ys_.size())
    throw ValidationError("piecewise-linear function needs matching, nonempty "
                          "breakpoint coordinate lists");
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (xs_[i] <= 0 || ys_[i] <= 0)
      throw ValidationError("breakpoints must have positive coordinates");
    if (i > 0 && xs_[i] <= xs_[i - 1])
      throw ValidationError("breakpoint x coordinates must strictly increase");
    if (i > 0 && ys_[i] <= ys_[i - 1])
      throw ValidationError("breakpoint y coordinates must strictly increase");
  }
  if (left_slope_ <= 0)
    throw ValidationError("slope left of the first breakpoint must be > 0");
  if (right_slope_ < 0)
    throw ValidationError("slope right of the last breakpoint must be >= 0");
  if (ys_.front() - left_slope_ * xs_.front() < 0)
    throw ValidationError(
        "function must stay positive: value at 0+ would be negative");
}

void PiecewiseLinearFn::normalize() {
  bool changed = true;
  while (changed) {
    changed = false;
    if (xs_.size() >= 2 &&
        left_slope_ == seg_slope(xs_[0], ys_[0], xs_[1], ys_[1])) {
      xs_.erase(xs_.begin());
      ys_.erase(ys_.begin());
      changed = true;
    }
    std::size_t n = xs_.size();
    if (n >= 2 && right_slope_ ==
                      seg_slope(xs_[n - 2], ys_[n - 2], xs_[n - 1], ys_[n - 1])) {
      xs_.pop_back();
      ys_.pop_back();
      changed = true;
    }
    for (std::size_t i = 1; i + 1 < xs_.size(); ++i) {
      if (seg_slope(xs_[i - 1], ys_[i - 1], xs_[i], ys_[i]) ==
          seg_slope(xs_[i], ys_[i], xs_[i + 1], ys_[i + 1])) {
        xs_.erase(xs_.begin() + static_cast<std::ptrdiff_t>(i));
        ys_.erase(ys_.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  // Pure linear map: anchor the single (redundant) breakpoint at x = 1.
  if (xs_.size() == 1 && left_slope_ == right_slope_ && xs_[0] != 1) {
    ys_[0] += left_slope_ * (1 - xs_[0]);
    xs_[0] = 1;
  }
}

PiecewiseLinearFn PiecewiseLinearFn::identity() { return linear(1); }

PiecewiseLinearFn PiecewiseLinearFn::linear(const Rat& slope) {
  return affine(slope, 0);
}

PiecewiseLinearFn PiecewiseLinearFn::affine(const Rat& slope,
                                            const Rat& offset) {
  return PiecewiseLinearFn({1}, {slope + offset}, slope, slope);
}

Rat PiecewiseLinearFn::operator()(const Rat& x) const {
  if (x <= 0) throw ValidationError("comparison functions take inputs > 0");
  if (x <= xs_.front())
    return ys_.front() - left_slope_ * (xs_.front() - x);
  if (x >= xs_.back()) return ys_.back() + right_slope_ * (x - xs_.back());
  auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs_.begin());
  return ys_[i - 1] +
         seg_slope(xs_[i - 1], ys_[i - 1], xs_[i], ys_[i]) * (x - xs_[i - 1]);
}

double PiecewiseLinearFn::eval_double(double x) const {
  if (!(x > 0)) throw ValidationError("comparison functions take inputs > 0");
  return rat_to_double((*this)(rat_from_double(x)));
}

Rat PiecewiseLinearFn::inf_value() const {
  return ys_.front() - left_slope_ * xs_.front();
}

std::optional<Rat> PiecewiseLinearFn::sup_value() const {
  if (unbounded_image()) return std::nullopt;
  return ys_.back();
}

bool PiecewiseLinearFn::is_identity() const {
  return left_slope_ == 1 && right_slope_ == 1 && xs_.size() == 1 &&
         xs_[0] == 1 && ys_[0] == 1;
}

Rat PiecewiseLinearFn::slope_below(const Rat& x) const {
  if (x <= xs_.front()) return left_slope_;
  if (x > xs_.back()) return right_slope_;
  auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs_.begin());
  return seg_slope(xs_[i - 1], ys_[i - 1], xs_[i], ys_[i]);
}

Rat PiecewiseLinearFn::slope_above(const Rat& x) const {
  if (x < xs_.front()) return left_slope_;
  if (x >= xs_.back()) return right_slope_;
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs_.begin());
  return seg_slope(xs_[i - 1], ys_[i - 1], xs_[i], ys_[i]);
}

std::string PiecewiseLinearFn::to_string() const {
  std::ostringstream os;
  os << "PL{";
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (i) os << ", ";
    os << "(" << rat_to_string(xs_[i]) << ", " << rat_to_string(ys_[i]) << ")";
  }
  os << "; left=" << rat_to_string(left_slope_)
     << ", right=" << rat_to_string(right_slope_) << "}";
  return os.str();
}

std::optional<Rat> preimage(const PiecewiseLinearFn& g, const Rat& v) {
  if (v <= g.inf_value()) return std::nullopt;
  const auto& xs = g.xs();
  const auto& ys = g.ys();
  if (v <= ys.front())
    return xs.front() - (ys.front() - v) / g.left_slope();
  if (v >= ys.back()) {
    if (g.right_slope() == 0)
      return v == ys.back() ? std::optional<Rat>(xs.back()) : std::nullopt;
    return xs.back() + (v - ys.back()) / g.right_slope();
  }
  auto it = std::lower_bound(ys.begin(), ys.end(), v);
  std::size_t i = static_cast<std::size_t>(it - ys.begin());
  return xs[i - 1] + (v - ys[i - 1]) * (xs[i] - xs[i - 1]) / (ys[i] - ys[i - 1]);
}

PiecewiseLinearFn compose(const PiecewiseLinearFn& f,
                          const PiecewiseLinearFn& g) {
  std::vector<Rat> bps = g.xs();
  for (const Rat& xf : f.xs()) {
    auto p = preimage(g, xf);
    if (p && *p > 0) bps.push_back(*p);
  }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

  std::vector<Rat> vals;
  vals.reserve(bps.size());
  for (const Rat& x : bps) vals.push_back(f(g(x)));

  // Once the composite stops increasing it is flat forever (both stages are
  // nondecreasing), so trailing repeats collapse into a zero right tail.
  std::size_t keep = bps.size();
  for (std::size_t i = 1; i < bps.size(); ++i)
    if (vals[i] == vals[i - 1]) {
      keep = i;
      break;
    }
  Rat left = f.slope_below(g(bps.front())) * g.left_slope();
  Rat right;
  if (keep < bps.size()) {
    bps.resize(keep);
    vals.resize(keep);
    right = 0;
  } else {
    right = g.right_slope() == 0
                ? Rat(0)
                : f.slope_above(g(bps.back())) * g.right_slope();
  }
  return PiecewiseLinearFn(std::move(bps), std::move(vals), std::move(left),
                           std::move(right));
}

PiecewiseLinearFn invert(const PiecewiseLinearFn& f) {
  if (f.inf_value() > 0)
    throw NotInvertibleError(
        "cannot invert: infimum of the image is positive (" +
        rat_to_string(f.inf_value()) + ")");
  if (!f.unbounded_image())
    throw NotInvertibleError("cannot invert: image is bounded above by " +
                             rat_to_string(*f.sup_value()));
  return PiecewiseLinearFn(f.ys(), f.xs(), 1 / f.left_slope(),
                           1 / f.right_slope());
}

PointwiseOrder pointwise_leq(const PiecewiseLinearFn& f,
                             const PiecewiseLinearFn& g, const Rat& lo,
                             const Rat& hi) {
  if (lo <= 0 || hi < lo)
    throw ValidationError("pointwise comparison needs 0 < lo <= hi");
  std::vector<Rat> pts{lo, hi};
  for (const auto* fn : {&f, &g})
    for (const Rat& x : fn->xs())
      if (lo < x && x < hi) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (const Rat& x : pts)
    if (f(x) > g(x)) return {false, x};
  return {true, std::nullopt};
}

PropertyTag PropertyTag::make(bool inv, bool unbounded, bool id) {
  PropertyTag t;
  t.identity = id;
  t.invertible = inv || id;
  t.unbounded_image = unbounded || id;
  return t;
}

std::string PropertyTag::to_string() const {
  if (identity) return "identity";
  std::string s;
  if (invertible) s += "invertible";
  if (unbounded_image) s += s.empty() ? "unbounded-image" : ", unbounded-image";
  return s.empty() ? "none" : s;
}

PropertyTag properties(const PiecewiseLinearFn& f) {
  return PropertyTag::make(f.invertible(), f.unbounded_image(),
                           f.is_identity());
}

PropertyTag compose(const PropertyTag& f, const PropertyTag& g) {
  return PropertyTag::make(f.invertible && g.invertible,
                           f.unbounded_image && g.unbounded_image,
                           f.identity && g.identity);
}

PropertyTag inverse(const PropertyTag& f) {
  if (!f.invertible)
    throw NotInvertibleError("property algebra: inverse of a function not "
                             "tagged invertible");
  return PropertyTag::make(true, true, f.identity);
}

}  // namespace lyap
