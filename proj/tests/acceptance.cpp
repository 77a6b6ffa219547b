// Acceptance run: one PASS/FAIL line per criterion. Counts are exact; the
// time limits below are the only tolerances.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "fairplan/error.hpp"
#include "fairplan/fairness.hpp"
#include "fairplan/hardgen.hpp"
#include "fairplan/planner.hpp"
#include "fairplan/semantics.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace fairplan;
using namespace fairplan::testing;

namespace {

constexpr double kA1Seconds = 1.0;
constexpr double kA2Seconds = 5.0;
constexpr double kA3Seconds = 120.0;
constexpr double kA4Seconds = 120.0;
constexpr double kA5Seconds = 300.0;
constexpr double kA6Seconds = 120.0;
constexpr double kA7Seconds = 120.0;
constexpr double kA9Seconds = 60.0;

const char* kPsi1 = "F (l & X X l)";
const char* kPsi2 = "!l | F (l & X X !r) | F (l & X X X X !l)";

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(const char* id, double limit, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = limit <= 0 || secs < limit;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  char timing[64];
  if (limit > 0) std::snprintf(timing, sizeof timing, "%.2f s, limit %.0f s", secs, limit);
  else std::snprintf(timing, sizeof timing, "%.2f s", secs);
  std::printf("%s %s (%s) %s%s\n", id, pass ? "PASS" : "FAIL", timing, o.detail.c_str(), in_time ? "" : " [too slow]");
  std::fflush(stdout);
}

std::string count(int good, int total) { return std::to_string(good) + "/" + std::to_string(total); }

/// Loops equal up to a cyclic shift.
bool rotation_of(const std::vector<Letter>& a, const std::vector<Letter>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    bool same = true;
    for (std::size_t i = 0; i < a.size() && same; ++i) same = a[(i + k) % a.size()] == b[i];
    if (same) return true;
  }
  return false;
}

/// Is there a cycle reachable from `from` in the strategy-restricted graph
/// that violates every pair? SCC refinement: inside a component, a pair whose
/// inf set is hit and whose finite set is missed is defeated by dropping its
/// inf vertices; a component where every pair already fails is a bad cycle.
bool has_bad_cycle(const RabinGame& g, const std::vector<int>& strategy, int from) {
  const std::size_t n = g.size();
  auto next = [&](int v) -> std::vector<int> {
    if (g.agent[v]) return {strategy[v]};
    return g.succ[v];
  };
  std::vector<char> reach(n, 0);
  std::vector<int> stack{from};
  reach[from] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : next(v))
      if (!reach[w]) reach[w] = 1, stack.push_back(w);
  }
  auto components = [&](const std::vector<char>& keep) {
    // Components by mutual reachability, quadratic but tiny.
    std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
    for (std::size_t v = 0; v < n; ++v) {
      if (!keep[v]) continue;
      std::vector<int> st{static_cast<int>(v)};
      while (!st.empty()) {
        const int x = st.back();
        st.pop_back();
        for (int w : next(x))
          if (keep[w] && !r[v][w]) r[v][w] = 1, st.push_back(w);
      }
    }
    std::vector<std::vector<int>> out;
    std::vector<char> done(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
      if (!keep[v] || done[v] || !r[v][v]) continue;
      std::vector<int> c;
      for (std::size_t w = 0; w < n; ++w)
        if (keep[w] && r[v][w] && r[w][v]) c.push_back(static_cast<int>(w)), done[w] = 1;
      out.push_back(c);
    }
    return out;
  };
  std::function<bool(const std::vector<char>&)> search = [&](const std::vector<char>& keep) {
    for (const auto& c : components(keep)) {
      std::set<int> in(c.begin(), c.end());
      std::vector<char> sub(n, 0);
      for (int v : c) sub[v] = 1;
      bool all_fail = true;
      for (const auto& p : g.pairs) {
        bool inf = false;
        bool fin = false;
        for (int v : p.inf) inf |= in.count(v) > 0;
        for (int v : p.finite) fin |= in.count(v) > 0;
        if (inf && !fin) {
          all_fail = false;
          for (int v : p.inf) sub[v] = 0;
        }
      }
      if (all_fail || search(sub)) return true;
    }
    return false;
  };
  return search(reach);
}

DRW random_drw(Rng& rng, const Alphabet& alphabet, std::size_t max_states, std::size_t max_pairs) {
  DRW m;
  m.alphabet = alphabet;
  m.num_states = 1 + rng() % max_states;
  for (std::size_t i = 0; i < m.num_states * alphabet.size(); ++i) m.delta.push_back(static_cast<int>(rng() % m.num_states));
  const std::size_t pairs = rng() % (max_pairs + 1);
  for (std::size_t k = 0; k < pairs; ++k) {
    RabinPair p;
    for (std::size_t q = 0; q < m.num_states; ++q) {
      const auto roll = rng() % 3;
      if (roll == 0) p.inf.push_back(static_cast<int>(q));
      if (roll == 1) p.finite.push_back(static_cast<int>(q));
    }
    m.pairs.push_back(p);
  }
  return m;
}

}  // namespace

int main() {
  const Domain d = d1();

  criterion("A1", kA1Seconds, [&] {
    const auto psi1 = parse_formula(kPsi1, Dialect::Ltlf);
    const bool sa = plan(d, psi1, {Fairness::StateAction, Mode::Sound, Dialect::Ltlf}).sat;
    const auto st = plan(d, psi1, {Fairness::Stochastic, Mode::Sound, Dialect::Ltlf});
    PolicyMachine only(1, d.num_states());
    for (std::size_t s = 0; s < d.num_states(); ++s) only.set(0, static_cast<StateId>(s), 0, 0);
    const auto report = verify(d, only, psi1, Dialect::Ltlf, Fairness::StateAction);
    const bool witness = report.witness && rotation_of(report.witness->normalized().loop, tau1(d).loop);
    const bool ok = !sa && st.sat && !report.pass && witness;
    return Outcome{ok, std::string("state-action ") + (sa ? "SAT" : "UNSAT") + ", stochastic " + (st.sat ? "SAT" : "UNSAT") +
                           ", verify " + (report.pass ? "PASS" : "FAIL") + (witness ? " with tau1" : " without tau1")};
  });

  criterion("A2", kA2Seconds, [&] {
    const auto psi2 = parse_formula(kPsi2, Dialect::Ltl);
    const bool sound = plan(d, psi2, {Fairness::StateAction, Mode::Sound, Dialect::Ltl}).sat;
    const auto naive = plan(d, psi2, {Fairness::StateAction, Mode::NaiveProduct, Dialect::Ltl});
    return Outcome{!sound && naive.sat && naive.diagnostic,
                   std::string("sound ") + (sound ? "SAT" : "UNSAT") + ", naive " + (naive.sat ? "SAT" : "UNSAT")};
  });

  // The 200 random instances shared by A3 and A4.
  std::vector<Domain> domains;
  {
    Rng rng(3001);
    for (int i = 0; i < 200; ++i) domains.push_back(random_domain(rng, {6, 3, 2}));
  }

  criterion("A3", kA3Seconds, [&] {
    Rng rng(3002);
    int agree = 0;
    int sat = 0;
    for (const auto& dom : domains) {
      const auto target = random_formula(rng, {"f0", "f1", "f2"}, 2, false);
      const auto goal = Formula::eventually(target);
      const bool sa = plan(dom, goal, {Fairness::StateAction, Mode::Sound, Dialect::Ltl}).sat;
      const bool st = plan(dom, goal, {Fairness::Stochastic, Mode::Sound, Dialect::Ltl}).sat;
      const bool sc = strong_cyclic_reachability(dom, target).sat;
      agree += sa == st && st == sc;
      sat += sa;
    }
    return Outcome{agree == 200, count(agree, 200) + " agree, " + std::to_string(sat) + " solvable"};
  });

  criterion("A4", kA4Seconds, [&] {
    Rng rng(3003);
    int counterexamples = 0;
    int separating = 0;
    int sa_sat = 0;
    auto one = [&](const Domain& dom, const Formula& goal) {
      const bool sa = plan(dom, goal, {Fairness::StateAction, Mode::Sound, Dialect::Ltlf}).sat;
      const bool st = plan(dom, goal, {Fairness::Stochastic, Mode::Sound, Dialect::Ltlf}).sat;
      counterexamples += sa && !st;
      separating += st && !sa;
      sa_sat += sa;
    };
    for (const auto& dom : domains) one(dom, random_formula(rng, {"f0", "f1", "f2", "a0"}, 3));
    one(d, parse_formula(kPsi1, Dialect::Ltlf));
    return Outcome{counterexamples == 0 && separating >= 1,
                   std::to_string(counterexamples) + " counterexamples, " + std::to_string(separating) +
                       " almost-sure only, " + std::to_string(sa_sat) + " state-action SAT of 201"};
  });

  criterion("A5", kA5Seconds, [&] {
    const std::vector<std::pair<const char*, bool>> machines = {
        {"atm_accept.json", true}, {"atm_reject.json", false}, {"atm_branch.json", true}};
    int right = 0;
    std::string wrong;
    for (const auto& [name, accepts] : machines) {
      const auto h = gen_instance(load_atm_file(fixture(name)), "0", 1);
      for (auto f : {Fairness::None, Fairness::Stochastic, Fairness::StateAction}) {
        const bool sat = plan(h.domain, h.goal, {f, Mode::Sound, Dialect::Ltlf}).sat;
        if (sat == accepts) ++right;
        else wrong += std::string(" ") + name + "/" + std::string(to_string(f));
      }
    }
    return Outcome{right == 9, count(right, 9) + " runs match acceptance" + wrong};
  });

  criterion("A6", kA6Seconds, [&] {
    Rng rng(3006);
    const Vocabulary v({"p", "q"});
    const Alphabet alphabet = Alphabet::powerset(v);
    int ltl = 0;
    int ltlf = 0;
    for (int i = 0; i < 500; ++i) {
      const auto phi = random_formula(rng, {"p", "q"}, 3);
      const auto w = random_lasso(rng, alphabet.letters(), 4, 4);
      ltl += drw_run_lasso(goal_to_drw(phi, Dialect::Ltl, alphabet), w) == naive_lasso(w, 0, phi, v);
      ltlf += drw_run_lasso(goal_to_drw(phi, Dialect::Ltlf, alphabet), w) ==
              naive_prefix(w, phi, v, 48);
    }
    return Outcome{ltl == 500 && ltlf == 500, "ltl " + count(ltl, 500) + ", ltlf " + count(ltlf, 500)};
  });

  criterion("A7", kA7Seconds, [&] {
    Rng rng(3007);
    int agree = 0;
    int audited = 0;
    int agent_wins = 0;
    int mutated_agree = 0;
    int mutated_bad = 0;
    for (int i = 0; i < 300; ++i) {
      const auto g = random_game(rng);
      const auto fast = solve_rabin(g);
      const auto slow = brute_force_rabin(g);
      agree += fast.winner == slow.winner;
      if (fast.winner == Player::Agent) {
        ++agent_wins;
        audited += !has_bad_cycle(g, fast.strategy, g.initial);
      }
      // The oracle must also catch losing strategies.
      std::vector<int> any(g.size(), -1);
      for (std::size_t v = 0; v < g.size(); ++v)
        if (g.agent[v]) any[v] = g.succ[v][rng() % g.succ[v].size()];
      const bool bad = has_bad_cycle(g, any, g.initial);
      mutated_bad += bad;
      mutated_agree += bad != strategy_is_winning(g, any, g.initial);
    }
    return Outcome{agree == 300 && audited == agent_wins && mutated_agree == 300 && mutated_bad > 0,
                   count(agree, 300) + " winners agree, " + count(audited, agent_wins) + " certificates audited, " +
                       count(mutated_agree, 300) + " random strategies judged alike (" + std::to_string(mutated_bad) + " losing)"};
  });

  criterion("A8", 0, [&] {
    Rng rng(3008);
    const Alphabet alphabet = Alphabet::powerset(Vocabulary({"p", "q"}));
    int unions = 0;
    for (int i = 0; i < 50; ++i) {
      const auto a = random_drw(rng, alphabet, 5, 3);
      const auto b = random_drw(rng, alphabet, 5, 3);
      const auto u = drw_union(a, b);
      unions += u.size() == a.size() * b.size() && u.index() == a.index() + b.index();
    }
    int unfair = 0;
    for (int i = 0; i < 50; ++i) {
      const auto dom = random_domain(rng, {6, 3, 2});
      unfair += unfair_drw(dom).index() == dom.transitions().size();
    }
    return Outcome{unions == 50 && unfair == 50, "union " + count(unions, 50) + ", unfair " + count(unfair, 50)};
  });

  criterion("A9", kA9Seconds, [&] {
    const auto phi = emit_fairness_formula(d);
    int total = 0;
    int agree = 0;
    for_each_domain_lasso(d, 6, 6, [&](const Lasso& w) {
      ++total;
      agree += eval_ltl_lasso(w, phi, d.vocabulary(), Dialect::Ltl) == fair_by_definition(d, w) &&
               is_state_action_fair(w, d) == fair_by_definition(d, w);
      return true;
    });
    Rng rng(3009);
    int sampled = 0;
    int sampled_agree = 0;
    for (int i = 0; i < 20; ++i) {
      Domain dom = random_domain(rng, {4, 2, 2});
      while (dom.num_states() != 4) dom = random_domain(rng, {4, 2, 2});
      const auto f = emit_fairness_formula(dom);
      for (int k = 0; k < 50; ++k) {
        const auto w = random_domain_lasso(rng, dom, 5, 5);
        ++sampled;
        sampled_agree += eval_ltl_lasso(w, f, dom.vocabulary(), Dialect::Ltl) == fair_by_definition(dom, w) &&
                         is_state_action_fair(w, dom) == fair_by_definition(dom, w);
      }
    }
    return Outcome{agree == total && sampled_agree == sampled && total > 0,
                   "D1 " + count(agree, total) + " lassos, random " + count(sampled_agree, sampled)};
  });

  return failures == 0 ? 0 : 1;
}
