#include <random>

#include "doctest.h"
#include "lyapkit/errors.hpp"
#include "lyapkit/oracle.hpp"
#include "support.hpp"

using namespace lyap;

namespace {

// path metric on three states: 0 - 1 - 2 with unit edges
FiniteInstance chain3(std::vector<std::vector<std::size_t>> maps) {
  FiniteInstance inst;
  inst.dist = {{Rat(0), Rat(1), Rat(2)},
               {Rat(1), Rat(0), Rat(1)},
               {Rat(2), Rat(1), Rat(0)}};
  inst.letter_maps = std::move(maps);
  return inst;
}

}  // namespace

TEST_CASE("instance validation") {
  FiniteInstance inst = chain3({{0, 0, 1}});
  inst.validate();

  FiniteInstance no_letters = chain3({});
  CHECK_THROWS_AS(no_letters.validate(), ValidationError);

  FiniteInstance bad_target = chain3({{0, 3, 1}});
  CHECK_THROWS_AS(bad_target.validate(), ValidationError);

  FiniteInstance asym = chain3({{0, 0, 1}});
  asym.dist[0][1] = Rat(5);
  CHECK_THROWS_AS(asym.validate(), ValidationError);

  FiniteInstance zero_off = chain3({{0, 0, 1}});
  zero_off.dist[1][2] = zero_off.dist[2][1] = Rat(0);
  CHECK_THROWS_AS(zero_off.validate(), ValidationError);
}

TEST_CASE("reachability fixpoint on hand cases") {
  // 3-cycle: every start floods the whole cycle
  FiniteInstance cyc = chain3({{1, 2, 0}});
  CHECK(brute_reach(cyc, 1u << 0) == 0b111);
  CHECK(brute_reach(cyc, 1u << 2) == 0b111);

  // everything funnels to 0, which is fixed
  FiniteInstance funnel = chain3({{0, 0, 0}});
  CHECK(brute_reach(funnel, 1u << 2) == 0b101);
  CHECK(brute_reach(funnel, 1u << 0) == 0b001);

  // two letters: reach is closed under both
  FiniteInstance two = chain3({{0, 0, 1}, {0, 2, 2}});
  CHECK(brute_reach(two, 1u << 1) == 0b111);
}

TEST_CASE("closed balls as bitmasks") {
  FiniteInstance inst = chain3({{0, 0, 1}});
  CHECK(brute_ball(inst, 0, Rat(0)) == 0b001);
  CHECK(brute_ball(inst, 0, Rat(1)) == 0b011);
  CHECK(brute_ball(inst, 0, Rat(3, 2)) == 0b011);
  CHECK(brute_ball(inst, 0, Rat(2)) == 0b111);
  CHECK(brute_ball(inst, 1, Rat(1)) == 0b111);
}

TEST_CASE("largest valid delta radius by scan") {
  // monotone funnel toward 0: each epsilon admits its own radius
  FiniteInstance inst = chain3({{0, 0, 1}});
  CHECK(brute_delta_exists(inst, 0, Rat(2)) == Rat(2));
  CHECK(brute_delta_exists(inst, 0, Rat(1)) == Rat(1));
  // singleton radius: ball = {0}, reach = {0}
  CHECK(brute_delta_exists(inst, 0, Rat(1, 2)) == Rat(1, 2));

  // the 3-cycle escapes every ball around 0 except none at all
  FiniteInstance cyc = chain3({{1, 2, 0}});
  CHECK_FALSE(brute_delta_exists(cyc, 0, Rat(1)).has_value());
  // but at epsilon = 2 the whole space is the ball, so anything works
  CHECK(brute_delta_exists(cyc, 0, Rat(2)) == Rat(2));

  // 0 fixed but 1 maps outward: the radius-1 ball escapes, the singleton
  // still works
  FiniteInstance out = chain3({{0, 2, 2}});
  CHECK(brute_delta_exists(out, 0, Rat(1)) == Rat(1, 2));
}

TEST_CASE("theorem replay on a contracting instance") {
  BruteReport rep = brute_check_theorems(chain3({{0, 0, 1}}));
  CHECK(rep.ok);
  CHECK(rep.counterexamples.empty());
  CHECK(rep.equilibria_found == 1);  // only state 0 is fixed
}

TEST_CASE("theorem replay skips non-equilibrium states") {
  // the 3-cycle has no Lyapunov equilibrium at any state
  BruteReport rep = brute_check_theorems(chain3({{1, 2, 0}}));
  CHECK(rep.ok);
  CHECK(rep.equilibria_found == 0);

  // identity map: every state qualifies
  BruteReport all = brute_check_theorems(chain3({{0, 1, 2}}));
  CHECK(all.ok);
  CHECK(all.equilibria_found == 3);
}

TEST_CASE("brute reach agrees with the engine's future") {
  std::mt19937_64 g(991);
  for (int round = 0; round < 200; ++round) {
    FiniteInstance inst = testsupport::random_instance(g, 10, round % 2 == 0);
    DynamicalSystem sys = inst.to_system();
    const std::size_t n = inst.states();
    for (std::size_t s = 0; s < n; ++s) {
      std::uint64_t mask = brute_reach(inst, std::uint64_t{1} << s);
      StateSet eng = future(sys, FiniteSet::singleton(n, s),
                            Horizon::unbounded());
      const FiniteSet& fs = std::get<FiniteSet>(eng);
      for (std::size_t u = 0; u < n; ++u)
        CHECK(((mask >> u) & 1u) == static_cast<std::uint64_t>(
                                        fs.contains(u) ? 1 : 0));
    }
  }
}

TEST_CASE("random pinned instances never produce counterexamples") {
  std::mt19937_64 g(20240819);
  for (int round = 0; round < 60; ++round) {
    FiniteInstance inst = testsupport::random_instance(g, 8, true);
    BruteReport rep = brute_check_theorems(inst);
    if (!rep.ok)
      for (const std::string& c : rep.counterexamples) MESSAGE(c);
    CHECK(rep.ok);
    CHECK(rep.equilibria_found >= 1);  // state 0 is pinned
  }
}
