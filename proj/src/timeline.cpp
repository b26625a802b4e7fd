#include "lyapkit/timeline.hpp"

#include <algorithm>

#include "lyapkit/errors.hpp"

namespace lyap {

namespace {

void require_member(const Timeline& tl, const TimePoint& t, const char* who) {
  bool ok = false;
  switch (tl.kind) {
    case TimelineKind::DiscreteLinear:
      ok = t.is_ticks();
      break;
    case TimelineKind::ContinuousLinear:
      ok = t.is_duration();
      break;
    case TimelineKind::FreeMonoid:
      ok = t.is_word();
      if (ok) {
        for (unsigned letter : t.word_value()) {
          if (letter >= tl.alphabet_size) {
            throw ValidationError(std::string(who) +
                                  ": word letter outside declared alphabet");
          }
        }
      }
      break;
  }
  if (!ok) {
    throw KindMismatchError(std::string(who) +
                            ": time point does not belong to timeline " +
                            tl.to_string());
  }
}

char letter_char(unsigned letter) {
  return static_cast<char>('a' + static_cast<char>(letter));
}

}  // namespace

Timeline Timeline::free_monoid(unsigned alphabet) {
  if (alphabet < 1) throw ValidationError("free monoid alphabet must be >= 1");
  return {TimelineKind::FreeMonoid, alphabet};
}

std::string Timeline::to_string() const {
  switch (kind) {
    case TimelineKind::DiscreteLinear:
      return "discrete";
    case TimelineKind::ContinuousLinear:
      return "continuous";
    case TimelineKind::FreeMonoid:
      return "free(" + std::to_string(alphabet_size) + ")";
  }
  return {};
}

TimePoint TimePoint::duration(Rat d) {
  if (d < 0) throw ValidationError("durations must be nonnegative");
  return TimePoint(std::move(d));
}

std::uint64_t TimePoint::tick_count() const {
  return std::get<std::uint64_t>(rep_);
}

const Rat& TimePoint::duration_value() const { return std::get<Rat>(rep_); }

const Word& TimePoint::word_value() const { return std::get<Word>(rep_); }

TimePoint zero(const Timeline& tl) {
  switch (tl.kind) {
    case TimelineKind::DiscreteLinear:
      return TimePoint::ticks(0);
    case TimelineKind::ContinuousLinear:
      return TimePoint::duration(Rat(0));
    case TimelineKind::FreeMonoid:
      return TimePoint::word({});
  }
  return {};
}

TimePoint plus(const Timeline& tl, const TimePoint& a, const TimePoint& b) {
  require_member(tl, a, "plus");
  require_member(tl, b, "plus");
  switch (tl.kind) {
    case TimelineKind::DiscreteLinear:
      return TimePoint::ticks(a.tick_count() + b.tick_count());
    case TimelineKind::ContinuousLinear:
      return TimePoint::duration(a.duration_value() + b.duration_value());
    case TimelineKind::FreeMonoid: {
      Word w = a.word_value();
      const Word& tail = b.word_value();
      w.insert(w.end(), tail.begin(), tail.end());
      return TimePoint::word(std::move(w));
    }
  }
  return {};
}

bool leq(const Timeline& tl, const TimePoint& a, const TimePoint& b) {
  require_member(tl, a, "leq");
  require_member(tl, b, "leq");
  switch (tl.kind) {
    case TimelineKind::DiscreteLinear:
      return a.tick_count() <= b.tick_count();
    case TimelineKind::ContinuousLinear:
      return a.duration_value() <= b.duration_value();
    case TimelineKind::FreeMonoid: {
      const Word& wa = a.word_value();
      const Word& wb = b.word_value();
      if (wa.size() > wb.size()) return false;
      return std::equal(wa.begin(), wa.end(), wb.begin());
    }
  }
  return false;
}

TimePoint difference(const Timeline& tl, const TimePoint& a,
                     const TimePoint& b) {
  if (!leq(tl, a, b)) {
    throw NotComparableError("difference: " + to_string(tl, a) +
                             " is not below " + to_string(tl, b));
  }
  switch (tl.kind) {
    case TimelineKind::DiscreteLinear:
      return TimePoint::ticks(b.tick_count() - a.tick_count());
    case TimelineKind::ContinuousLinear:
      return TimePoint::duration(b.duration_value() - a.duration_value());
    case TimelineKind::FreeMonoid: {
      const Word& wa = a.word_value();
      const Word& wb = b.word_value();
      return TimePoint::word(Word(wb.begin() + static_cast<std::ptrdiff_t>(
                                                   wa.size()),
                                  wb.end()));
    }
  }
  return {};
}

std::string to_string(const Timeline& tl, const TimePoint& t) {
  switch (tl.kind) {
    case TimelineKind::DiscreteLinear:
      return std::to_string(t.tick_count());
    case TimelineKind::ContinuousLinear:
      return rat_to_string(t.duration_value());
    case TimelineKind::FreeMonoid: {
      const Word& w = t.word_value();
      if (w.empty()) return "<empty>";
      std::string out;
      if (tl.alphabet_size <= 26) {
        for (unsigned letter : w) out.push_back(letter_char(letter));
      } else {
        for (unsigned letter : w) {
          if (!out.empty()) out.push_back('.');
          out += std::to_string(letter);
        }
      }
      return out;
    }
  }
  return {};
}

TimePoint time_point_from_string(const Timeline& tl, const std::string& text) {
  switch (tl.kind) {
    case TimelineKind::DiscreteLinear: {
      Rat r = rat_from_string(text);
      if (denominator(r) != 1 || r < 0) {
        throw ValidationError("tick counts must be nonnegative integers: " +
                              text);
      }
      return TimePoint::ticks(numerator(r).convert_to<std::uint64_t>());
    }
    case TimelineKind::ContinuousLinear:
      return TimePoint::duration(rat_from_string(text));
    case TimelineKind::FreeMonoid: {
      Word w;
      if (text == "<empty>") return TimePoint::word(std::move(w));
      for (char c : text) {
        if (c < 'a' || static_cast<unsigned>(c - 'a') >= tl.alphabet_size) {
          throw ValidationError(std::string("letter '") + c +
                                "' outside the declared alphabet");
        }
        w.push_back(static_cast<unsigned>(c - 'a'));
      }
      return TimePoint::word(std::move(w));
    }
  }
  return {};
}

}  // namespace lyap
