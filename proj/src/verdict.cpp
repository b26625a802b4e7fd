#include "lyapkit/verdict.hpp"

namespace lyap {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Proved:
      return "PROVED";
    case Outcome::Sampled:
      return "SAMPLED";
    case Outcome::Fail:
      return "FAIL";
  }
  return {};
}

Verdict Verdict::meet(const Verdict& other) const {
  if (outcome == Outcome::Fail) return *this;
  if (other.outcome == Outcome::Fail) return other;
  Verdict out = *this;
  if (other.outcome == Outcome::Sampled) out.outcome = Outcome::Sampled;
  if (!other.detail.empty()) {
    out.detail = detail.empty() ? other.detail : detail + "; " + other.detail;
  }
  return out;
}

}  // namespace lyap
