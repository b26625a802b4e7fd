#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lyapkit/rat.hpp"

namespace lyap {

/// Strictly increasing piecewise-linear map of the positive reals with
/// rational breakpoints: the representable class for delta, A and B.
///
/// Left of the first breakpoint the function continues with left_slope,
/// right of the last with right_slope. A zero right slope represents a
/// saturating (bounded-image) function; such a function is the class's
/// stand-in for bounded comparison functions and is not invertible.
///
/// Instances are kept in canonical form (no collinear breakpoints; pure
/// linear maps anchored at x = 1), so operator== is pointwise equality.
class PiecewiseLinearFn {
 public:
  PiecewiseLinearFn(std::vector<Rat> xs, std::vector<Rat> ys, Rat left_slope,
                    Rat right_slope);

  static PiecewiseLinearFn identity();
  /// x -> slope * x (slope > 0).
  static PiecewiseLinearFn linear(const Rat& slope);
  /// x -> slope * x + offset, offset >= 0.
  static PiecewiseLinearFn affine(const Rat& slope, const Rat& offset);

  const std::vector<Rat>& xs() const { return xs_; }
  const std::vector<Rat>& ys() const { return ys_; }
  const Rat& left_slope() const { return left_slope_; }
  const Rat& right_slope() const { return right_slope_; }

  /// Evaluate at x > 0.
  Rat operator()(const Rat& x) const;
  double eval_double(double x) const;

  /// Limit value for x -> 0+ (0 exactly when the image reaches down to 0).
  Rat inf_value() const;
  /// Supremum of the image when bounded (attained plateau value), else none.
  std::optional<Rat> sup_value() const;

  bool unbounded_image() const { return right_slope_ > 0; }
  /// Bijection of the positive reals: infimum 0 and unbounded image.
  bool invertible() const { return inf_value() == 0 && unbounded_image(); }
  bool is_identity() const;

  bool operator==(const PiecewiseLinearFn&) const = default;

  std::string to_string() const;

 private:
  void validate() const;
  void normalize();

  // Slope immediately below / above a point of the input axis.
  Rat slope_below(const Rat& x) const;
  Rat slope_above(const Rat& x) const;
  friend PiecewiseLinearFn compose(const PiecewiseLinearFn&,
                                   const PiecewiseLinearFn&);

  std::vector<Rat> xs_, ys_;
  Rat left_slope_, right_slope_;
};

/// Exact composite f(g(x)); breakpoints are g's breakpoints together with
/// the g-preimages of f's breakpoints.
PiecewiseLinearFn compose(const PiecewiseLinearFn& f,
                          const PiecewiseLinearFn& g);

/// Exact inverse. Throws NotInvertibleError unless f is a bijection of the
/// positive reals.
PiecewiseLinearFn invert(const PiecewiseLinearFn& f);

/// If the preimage g^{-1}(v) exists (v in the closure of the image), return
/// it; the plateau of a saturating function maps to its first attainment.
std::optional<Rat> preimage(const PiecewiseLinearFn& g, const Rat& v);

struct PointwiseOrder {
  bool holds = false;
  std::optional<Rat> witness_x;  // point with f(x) > g(x) when !holds
};

/// Exact verdict for f <= g on [lo, hi] (0 < lo <= hi): piecewise-linear
/// order is decided at breakpoints and interval endpoints.
PointwiseOrder pointwise_leq(const PiecewiseLinearFn& f,
                             const PiecewiseLinearFn& g, const Rat& lo,
                             const Rat& hi);

/// Function-class membership flags; Identity implies the other two.
struct PropertyTag {
  bool invertible = false;
  bool unbounded_image = false;
  bool identity = false;

  static PropertyTag make(bool inv, bool unbounded, bool id);
  bool operator==(const PropertyTag&) const = default;
  std::string to_string() const;
};

PropertyTag properties(const PiecewiseLinearFn& f);
/// Tag of f o g given tags of f and g.
PropertyTag compose(const PropertyTag& f, const PropertyTag& g);
/// Tag of f^{-1}; requires the Invertible flag.
PropertyTag inverse(const PropertyTag& f);

}  // namespace lyap
