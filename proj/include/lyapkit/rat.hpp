#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lyap {

/// Exact rational scalar. All set-level reasoning in the toolkit is carried
/// out in exact arithmetic; floating point appears only in the quadratic
/// (eigenvalue) module and in sampled Euclidean reports.
using Rat = boost::multiprecision::cpp_rational;

Rat rat_from_string(std::string_view s);
std::string rat_to_string(const Rat& r);

/// Exact conversion: every binary64 value is a dyadic rational.
Rat rat_from_double(double d);
double rat_to_double(const Rat& r);

/// Extended observable value: a finite rational, the square root of a
/// nonnegative rational (Euclidean distances), or +infinity (states outside
/// every sublevel set). Comparisons are exact; sqrt values compare through
/// their squares.
class ExtVal {
 public:
  enum class Kind { Finite, Sqrt, Infinite };

  ExtVal() : kind_(Kind::Finite), q_(0) {}
  static ExtVal finite(Rat q) { return ExtVal(Kind::Finite, std::move(q)); }
  static ExtVal sqrt_of(Rat q);  // q >= 0
  static ExtVal infinity() { return ExtVal(Kind::Infinite, Rat(0)); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_sqrt() const { return kind_ == Kind::Sqrt; }
  bool is_infinite() const { return kind_ == Kind::Infinite; }

  /// The rational payload: the value itself (Finite) or its square (Sqrt).
  const Rat& payload() const { return q_; }

  /// Finite payload; throws on Sqrt/Infinite.
  const Rat& rational() const;

  double to_double() const;
  std::string to_string() const;

  std::strong_ordering operator<=>(const ExtVal& other) const;
  bool operator==(const ExtVal& other) const {
    return (*this <=> other) == std::strong_ordering::equal;
  }

 private:
  ExtVal(Kind k, Rat q) : kind_(k), q_(std::move(q)) {}
  Kind kind_;
  Rat q_;
};

}  // namespace lyap
