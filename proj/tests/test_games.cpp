#include <doctest.h>

#include "fairplan/error.hpp"
#include "fairplan/game.hpp"
#include "fairplan/planner.hpp"
#include "fairplan/semantics.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace fairplan;
using namespace fairplan::testing;

namespace {

RabinGame loop_game(std::vector<RabinPair> pairs) {
  RabinGame g;
  g.agent = {1, 0};
  g.succ = {{1}, {0}};
  g.pairs = std::move(pairs);
  return g;
}

/// Every fair lasso of the policy up to the bound satisfies the goal.
bool audit(const Domain& d, const PolicyMachine& p, const Formula& goal, Dialect dialect, bool fair_only) {
  return verify(d, p, goal, dialect, fair_only ? Fairness::StateAction : Fairness::None, 6).pass;
}

}  // namespace

TEST_CASE("trivial games") {
  const auto win = loop_game({{{0}, {}}});
  CHECK(solve_rabin(win).winner == Player::Agent);
  CHECK(brute_force_rabin(win).winner == Player::Agent);
  const auto lose = loop_game({{{0}, {0}}});
  CHECK(solve_rabin(lose).winner == Player::Environment);
  CHECK(brute_force_rabin(lose).winner == Player::Environment);
  const auto none = loop_game({});
  CHECK(solve_rabin(none).winner == Player::Environment);
  CHECK(brute_force_rabin(none).winner == Player::Environment);
}

TEST_CASE("malformed games are rejected") {
  RabinGame g = loop_game({});
  g.succ[1].clear();
  CHECK_THROWS_AS(solve_rabin(g), InvariantError);
}

TEST_CASE("solver agrees with brute force") {
  Rng rng(101);
  for (int i = 0; i < 300; ++i) {
    const auto g = random_game(rng);
    const auto fast = solve_rabin(g);
    const auto slow = brute_force_rabin(g);
    CHECK(fast.winner == slow.winner);
    for (std::size_t v = 0; v < g.size(); ++v) CHECK(fast.region[v] == slow.region[v]);
    if (fast.winner == Player::Agent) CHECK(strategy_is_winning(g, fast.strategy, g.initial));
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (fast.region[v]) CHECK(strategy_is_winning(g, fast.strategy, static_cast<int>(v)));
      if (g.agent[v] && fast.region[v]) CHECK(fast.region[fast.strategy[v]]);
    }
  }
}

TEST_CASE("adding a pair never shrinks the winning region") {
  Rng rng(103);
  for (int i = 0; i < 200; ++i) {
    auto g = random_game(rng, {6, 2, 2, 2});
    const auto before = solve_rabin(g).region;
    g.pairs.push_back(random_game(rng, {static_cast<std::size_t>(1), 1, 1, 1}).pairs.empty()
                          ? RabinPair{{static_cast<int>(rng() % g.num_agent())}, {}}
                          : RabinPair{{0}, {static_cast<int>(rng() % g.num_agent())}});
    const auto after = solve_rabin(g).region;
    for (std::size_t v = 0; v < g.size(); ++v) CHECK((!before[v] || after[v]));
  }
}

TEST_CASE("brute force guard") {
  Rng rng(107);
  RabinGame g = random_game(rng, {13, 1, 1, 1});
  while (g.num_agent() < 13) g = random_game(rng, {13, 1, 1, 1});
  for (std::size_t v = 0; v < 13; ++v) {
    g.succ[v] = {g.succ[0][0], static_cast<int>(g.size() - 1)};
    std::sort(g.succ[v].begin(), g.succ[v].end());
    g.succ[v].erase(std::unique(g.succ[v].begin(), g.succ[v].end()), g.succ[v].end());
  }
  bool choices = true;
  for (std::size_t v = 0; v < 13; ++v) choices = choices && g.succ[v].size() > 1;
  if (choices) CHECK_THROWS_AS(brute_force_rabin(g), CapacityError);
}

TEST_CASE("products project to domain traces") {
  const Domain d = d1();
  const auto psi2 = parse_formula("!l | F (l & X X !r) | F (l & X X X X !l)", Dialect::Ltl);
  const DRW m = goal_to_drw(psi2, Dialect::Ltl, Alphabet::of_domain(d));
  const RabinGame g = product(d, m);
  g.validate();
  CHECK(g.num_agent() <= d.num_states() * m.size());
  Rng rng(109);
  for (int i = 0; i < 100; ++i) {
    int v = g.initial;
    int q = m.initial;
    StateId s = d.initial();
    for (int step = 0; step < 12; ++step) {
      CHECK(g.domain_state[v] == s);
      CHECK(g.automaton_state[v] == q);
      const int e = g.succ[v][rng() % g.succ[v].size()];
      const int w = g.succ[e][rng() % g.succ[e].size()];
      CHECK(d.has_transition(s, g.action[e], g.domain_state[w]));
      q = m.next(q, m.alphabet.index(d.letter(s, g.action[e])));
      s = g.domain_state[w];
      v = w;
    }
  }
  DRW narrow = m;
  narrow.alphabet = Alphabet(d.vocabulary(), {d.letter(0, 0)});
  narrow.delta.resize(narrow.num_states);
  std::fill(narrow.delta.begin(), narrow.delta.end(), 0);
  CHECK_THROWS_AS(product(d, narrow), ValidationError);
}

TEST_CASE("lazy union product matches the explicit union") {
  Rng rng(113);
  for (int i = 0; i < 30; ++i) {
    const Domain d = random_domain(rng, {4, 2, 2});
    const auto goal = random_formula(rng, {"f0", "f1", "a0"}, 3);
    const DRW m = goal_to_drw(goal, Dialect::Ltlf, Alphabet::of_domain(d));
    const DRW u = unfair_drw(d);
    const auto lazy = solve_rabin(product(d, u, m));
    const auto full = solve_rabin(product(d, drw_union(u, m)));
    CHECK(lazy.winner == full.winner);
  }
}

TEST_CASE("the unfair automaton game on D1") {
  const Domain d = d1();
  const RabinGame g = product(d, unfair_drw(d));
  // Winning would mean every play of the unique strategy is unfair, but tau1 is fair.
  CHECK(solve_rabin(g).winner == Player::Environment);
  CHECK(brute_force_rabin(g).winner == Player::Environment);
}

TEST_CASE("state-action pipeline on D1") {
  const Domain d = d1();
  const auto psi1 = parse_formula("F (l & X X l)", Dialect::Ltlf);
  const DRW m = goal_to_drw(psi1, Dialect::Ltlf, Alphabet::of_domain(d));
  const RabinGame g = product(d, unfair_drw(d), m);
  CHECK(solve_rabin(g).winner == Player::Environment);
  CHECK(brute_force_rabin(g).winner == Player::Environment);

  const auto psi2 = parse_formula("!l | F (l & X X !r) | F (l & X X X X !l)", Dialect::Ltl);
  const auto r2 = plan(d, psi2, {Fairness::StateAction, Mode::Sound, Dialect::Ltl});
  CHECK_FALSE(r2.sat);
  CHECK(plan(d, psi2, {Fairness::StateAction, Mode::NaiveProduct, Dialect::Ltl}).sat);
}

TEST_CASE("extracted policies") {
  const Domain d = d1();
  const auto reach = parse_formula("F r", Dialect::Ltl);
  const auto r = plan(d, reach, {Fairness::StateAction, Mode::Sound, Dialect::Ltl});
  REQUIRE(r.sat);
  validate_policy(*r.policy, d);
  CHECK(r.policy->memory_size() <= r.automaton_states);
  for (std::size_t m = 0; m < r.policy->memory_size(); ++m) {
    for (std::size_t s = 0; s < d.num_states(); ++s) {
      if (r.policy->defined(static_cast<int>(m), static_cast<StateId>(s))) CHECK(r.policy->output(static_cast<int>(m), static_cast<StateId>(s)) == 0);
    }
  }
  CHECK(audit(d, *r.policy, reach, Dialect::Ltl, true));
  CHECK_FALSE(plan(d, reach, {Fairness::None, Mode::Sound, Dialect::Ltl}).sat);
}

TEST_CASE("extracted policies pass the bounded audit on random instances") {
  Rng rng(127);
  int sat = 0;
  for (int i = 0; i < 60; ++i) {
    const Domain d = random_domain(rng, {4, 2, 2});
    const auto goal = random_formula(rng, {"f0", "f1", "a0"}, 3);
    for (auto fairness : {Fairness::None, Fairness::StateAction}) {
      for (auto dialect : {Dialect::Ltl, Dialect::Ltlf}) {
        const auto r = plan(d, goal, {fairness, Mode::Sound, dialect});
        if (!r.sat) continue;
        ++sat;
        CHECK(r.policy->memory_size() <= r.automaton_states);
        CHECK(audit(d, *r.policy, goal, dialect, fairness == Fairness::StateAction));
      }
    }
  }
  CHECK(sat > 20);
}

TEST_CASE("no-fairness answers match exhaustive memoryless search on tiny instances") {
  // With no fairness and a reachability goal, memoryless policies suffice.
  Rng rng(131);
  for (int i = 0; i < 60; ++i) {
    const Domain d = random_domain(rng, {4, 2, 2});
    const auto goal = Formula::eventually(Formula::atom("f0"));
    const bool planned = plan(d, goal, {Fairness::None, Mode::Sound, Dialect::Ltl}).sat;
    bool found = false;
    std::vector<std::size_t> pick(d.num_states(), 0);
    while (!found) {
      PolicyMachine p(1, d.num_states());
      for (std::size_t s = 0; s < d.num_states(); ++s) p.set(0, static_cast<StateId>(s), d.applicable(static_cast<StateId>(s))[pick[s]], 0);
      found = verify(d, p, goal, Dialect::Ltl, Fairness::None, 5).pass;
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == d.applicable(static_cast<StateId>(k)).size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
    CHECK(planned == found);
  }
}
