#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "lyapkit/rat.hpp"

namespace lyap {

/// The three implemented timeline instances: (N, +, <=), (Q+, +, <=) and
/// free word monoids under concatenation with the prefix order.
enum class TimelineKind { DiscreteLinear, ContinuousLinear, FreeMonoid };

struct Timeline {
  TimelineKind kind = TimelineKind::DiscreteLinear;
  unsigned alphabet_size = 0;  // FreeMonoid only, >= 1

  static Timeline discrete() { return {TimelineKind::DiscreteLinear, 0}; }
  static Timeline continuous() { return {TimelineKind::ContinuousLinear, 0}; }
  static Timeline free_monoid(unsigned alphabet);

  bool operator==(const Timeline&) const = default;
  std::string to_string() const;
};

using Word = std::vector<unsigned>;  // letters 0..alphabet_size-1

/// A point of a timeline: tick count, nonnegative rational duration, or a
/// word. The value itself does not know its timeline; operations take the
/// Timeline and reject mismatched representations.
class TimePoint {
 public:
  TimePoint() : rep_(std::uint64_t{0}) {}
  static TimePoint ticks(std::uint64_t n) { return TimePoint(n); }
  static TimePoint duration(Rat d);
  static TimePoint word(Word w) { return TimePoint(std::move(w)); }

  bool is_ticks() const { return std::holds_alternative<std::uint64_t>(rep_); }
  bool is_duration() const { return std::holds_alternative<Rat>(rep_); }
  bool is_word() const { return std::holds_alternative<Word>(rep_); }

  std::uint64_t tick_count() const;
  const Rat& duration_value() const;
  const Word& word_value() const;

  bool operator==(const TimePoint&) const = default;

 private:
  explicit TimePoint(std::uint64_t n) : rep_(n) {}
  explicit TimePoint(Rat d) : rep_(std::move(d)) {}
  explicit TimePoint(Word w) : rep_(std::move(w)) {}
  std::variant<std::uint64_t, Rat, Word> rep_;
};

TimePoint zero(const Timeline& tl);

/// Monoid composition. For words this is concatenation and is not
/// commutative. Throws KindMismatchError if an operand does not belong to tl.
TimePoint plus(const Timeline& tl, const TimePoint& a, const TimePoint& b);

/// The canonical order: numeric for the linear kinds, prefix order for
/// words (a <= b iff b extends a).
bool leq(const Timeline& tl, const TimePoint& a, const TimePoint& b);

/// The unique t' with b = a + t'. Throws NotComparableError if !leq(a, b).
TimePoint difference(const Timeline& tl, const TimePoint& a,
                     const TimePoint& b);

std::string to_string(const Timeline& tl, const TimePoint& t);

/// Parse "3" (ticks), "3/2" (duration) or "abba" (word) per timeline kind.
TimePoint time_point_from_string(const Timeline& tl, const std::string& text);

}  // namespace lyap
