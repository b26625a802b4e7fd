#include "lyapkit/rat.hpp"

#include <cmath>
#include <sstream>

#include "lyapkit/errors.hpp"

namespace lyap {

Rat rat_from_string(std::string_view s) {
  std::string buf(s);
  std::istringstream is(buf);
  Rat r;
  is >> r;
  if (is.fail()) throw ValidationError("cannot parse rational: '" + buf + "'");
  char trailing = 0;
  if (is >> trailing) {
    throw ValidationError("trailing characters after rational: '" + buf + "'");
  }
  return r;
}

std::string rat_to_string(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

Rat rat_from_double(double d) {
  if (!std::isfinite(d)) throw ValidationError("non-finite double");
  return Rat(d);
}

double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

ExtVal ExtVal::sqrt_of(Rat q) {
  if (q < 0) throw ValidationError("sqrt of negative rational");
  return ExtVal(Kind::Sqrt, std::move(q));
}

const Rat& ExtVal::rational() const {
  if (kind_ != Kind::Finite) {
    throw ValidationError("extended value has no finite rational form: " +
                          to_string());
  }
  return q_;
}

double ExtVal::to_double() const {
  switch (kind_) {
    case Kind::Finite:
      return rat_to_double(q_);
    case Kind::Sqrt:
      return std::sqrt(rat_to_double(q_));
    case Kind::Infinite:
      return std::numeric_limits<double>::infinity();
  }
  return 0;
}

std::string ExtVal::to_string() const {
  switch (kind_) {
    case Kind::Finite:
      return rat_to_string(q_);
    case Kind::Sqrt:
      return "sqrt(" + rat_to_string(q_) + ")";
    case Kind::Infinite:
      return "inf";
  }
  return {};
}

std::strong_ordering ExtVal::operator<=>(const ExtVal& other) const {
  auto cmp_rat = [](const Rat& a, const Rat& b) {
    if (a < b) return std::strong_ordering::less;
    if (b < a) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  };
  if (is_infinite() || other.is_infinite()) {
    if (is_infinite() && other.is_infinite()) return std::strong_ordering::equal;
    return is_infinite() ? std::strong_ordering::greater
                         : std::strong_ordering::less;
  }
  if (is_finite() && other.is_finite()) return cmp_rat(q_, other.q_);
  if (is_sqrt() && other.is_sqrt()) return cmp_rat(q_, other.q_);
  // One finite, one sqrt: sqrt values are >= 0, so a negative finite value
  // is below; otherwise compare squares.
  if (is_finite()) {
    if (q_ < 0) return std::strong_ordering::less;
    return cmp_rat(q_ * q_, other.q_);
  }
  if (other.q_ < 0) return std::strong_ordering::greater;
  return cmp_rat(q_, other.q_ * other.q_);
}

}  // namespace lyap
