#include "fairplan/planner.hpp"

#include <bit>
#include <deque>
#include <map>

#include "fairplan/error.hpp"
#include "fairplan/semantics.hpp"

namespace fairplan {

std::string_view to_string(Fairness fairness) {
  switch (fairness) {
    case Fairness::None: return "none";
    case Fairness::Stochastic: return "stochastic";
    case Fairness::StateAction: return "state-action";
  }
  return "?";
}

Fairness parse_fairness(std::string_view text) {
  if (text == "none") return Fairness::None;
  if (text == "stochastic") return Fairness::Stochastic;
  if (text == "state-action") return Fairness::StateAction;
  throw ValidationError("unknown fairness '" + std::string(text) + "'");
}

std::string_view to_string(Mode mode) { return mode == Mode::Sound ? "sound" : "naive-product"; }

Mode parse_mode(std::string_view text) {
  if (text == "sound") return Mode::Sound;
  if (text == "naive-product") return Mode::NaiveProduct;
  throw ValidationError("unknown mode '" + std::string(text) + "'");
}

Domain product_domain(const Domain& d, const DRW& m, std::vector<int>* automaton_state) {
  const std::size_t bits = std::max<std::size_t>(1, std::bit_width(m.num_states - 1));
  std::vector<std::string> fluents = d.fluents();
  for (std::size_t b = 0; b < bits; ++b) fluents.push_back("_q" + std::to_string(b));
  const std::size_t shift = d.fluents().size();
  const std::size_t extra = bits;
  std::vector<Letter> actions;
  for (std::size_t a = 0; a < d.num_actions(); ++a) actions.push_back(d.action(static_cast<ActionId>(a)) << extra);

  std::map<std::pair<StateId, int>, StateId> index;
  std::vector<std::pair<StateId, int>> states;
  std::deque<StateId> queue;
  auto intern = [&](StateId s, int q) {
    auto [it, fresh] = index.emplace(std::make_pair(s, q), static_cast<StateId>(states.size()));
    if (fresh) {
      states.push_back({s, q});
      queue.push_back(it->second);
    }
    return it->second;
  };
  intern(d.initial(), m.initial);
  std::vector<Transition> tr;
  while (!queue.empty()) {
    const StateId v = queue.front();
    queue.pop_front();
    const auto [s, q] = states[v];
    for (ActionId a : d.applicable(s)) {
      const int q2 = m.next(q, m.alphabet.index(d.letter(s, a)));
      for (StateId t : d.successors(s, a)) tr.push_back({v, a, intern(t, q2)});
    }
  }
  std::vector<Letter> letters;
  for (const auto& [s, q] : states) letters.push_back(d.state(s) | static_cast<Letter>(q) << shift);
  if (automaton_state) {
    automaton_state->clear();
    for (const auto& sq : states) automaton_state->push_back(sq.second);
  }
  std::sort(tr.begin(), tr.end());
  return Domain(fluents, d.action_vars(), letters, actions, 0, tr);
}

namespace {

/// DRW over the letters of a domain whose state is the domain state of the
/// last letter read; pairs are given as domain-state sets.
DRW state_observer(const Domain& d, const std::vector<RabinPair>& state_pairs) {
  DRW m;
  m.alphabet = Alphabet::of_domain(d);
  m.num_states = d.num_states() + 1;
  m.initial = static_cast<int>(d.num_states());
  for (std::size_t q = 0; q < m.num_states; ++q) {
    for (Letter l : m.alphabet.letters()) m.delta.push_back(d.decode(l).first);
  }
  m.pairs = state_pairs;
  return m;
}

PlanResult from_game(const RabinGame& g, const WinningCertificate& cert, const Domain& d, bool with_policy) {
  PlanResult r;
  r.sat = cert.winner == Player::Agent;
  r.game_vertices = g.size();
  if (r.sat && with_policy) r.policy = extract_policy(g, cert, d);
  return r;
}

}  // namespace

PlanResult plan(const Domain& d, const Formula& goal, const PlanRequest& req) {
  if (req.mode == Mode::NaiveProduct && req.fairness != Fairness::StateAction) {
    throw ValidationError("naive-product mode requires state-action fairness");
  }
  const Alphabet alphabet = Alphabet::of_domain(d);
  if (req.fairness == Fairness::Stochastic) {
    const DRW m = goal_to_drw(goal, req.dialect, d, req.max_states);
    const RabinGame g = product(d, m);
    PlanResult r = from_game(g, almost_sure_rabin(g), d, true);
    r.automaton_states = m.size();
    r.automaton_pairs = m.index();
    return r;
  }
  const DRW m = goal_to_drw(goal, req.dialect, d, req.max_states);
  if (req.fairness == Fairness::None) {
    const RabinGame g = product(d, m);
    PlanResult r = from_game(g, solve_rabin(g), d, true);
    r.automaton_states = m.size();
    r.automaton_pairs = m.index();
    return r;
  }
  if (req.mode == Mode::Sound) {
    const DRW unfair = unfair_drw(d);
    const RabinGame g = product(d, unfair, m);
    PlanResult r = from_game(g, solve_rabin(g), d, true);
    r.automaton_states = g.memory_size();
    r.automaton_pairs = unfair.index() + m.index();
    return r;
  }
  // Solve the fair problem on D x A with the lifted acceptance condition.
  std::vector<int> q_of;
  const Domain dp = product_domain(d, m, &q_of);
  std::vector<RabinPair> lifted;
  for (const auto& p : m.pairs) {
    RabinPair l;
    for (std::size_t s = 0; s < dp.num_states(); ++s) {
      if (std::binary_search(p.inf.begin(), p.inf.end(), q_of[s])) l.inf.push_back(static_cast<int>(s));
      if (std::binary_search(p.finite.begin(), p.finite.end(), q_of[s])) l.finite.push_back(static_cast<int>(s));
    }
    lifted.push_back(std::move(l));
  }
  const DRW acc = state_observer(dp, lifted);
  const DRW unfair = unfair_drw(dp);
  const RabinGame g = product(dp, unfair, acc);
  PlanResult r = from_game(g, solve_rabin(g), dp, false);
  r.diagnostic = true;
  r.automaton_states = g.memory_size();
  r.automaton_pairs = unfair.index() + acc.index();
  return r;
}

VerifyReport verify(const Domain& d, const PolicyMachine& policy, const Formula& goal, Dialect dialect,
                    Fairness fairness, std::size_t bound, std::size_t max_states) {
  validate_policy(policy, d);
  VerifyReport report;
  if (fairness == Fairness::Stochastic) {
    const DRW m = goal_to_drw(goal, dialect, d, max_states);
    report.witness = almost_sure_audit(d, policy, m);
    report.pass = !report.witness;
    return report;
  }
  struct Config {
    int mem;
    StateId s;
    bool operator==(const Config&) const = default;
  };
  std::vector<Config> path;
  auto check = [&](std::size_t p) {
    Lasso w;
    for (std::size_t i = 0; i < path.size(); ++i) {
      (i < p ? w.prefix : w.loop).push_back(d.letter(path[i].s, policy.output(path[i].mem, path[i].s)));
    }
    ++report.lassos_checked;
    if (fairness == Fairness::StateAction && !is_state_action_fair(w, d)) return true;
    if (eval_ltl_lasso(w, goal, d.vocabulary(), dialect)) return true;
    report.pass = false;
    report.witness = w.normalized();
    return false;
  };
  auto rec = [&](auto&& self, Config c) -> bool {
    path.push_back(c);
    const ActionId a = policy.output(c.mem, c.s);
    const int m2 = policy.update(c.mem, c.s);
    const std::size_t n = path.size();
    for (std::size_t p = 0; p < n; ++p) {
      if (p > bound || n - p > bound) continue;
      const Config head = path[p];
      if (head.mem == m2 && d.has_transition(c.s, a, head.s) && !check(p)) return false;
    }
    if (n < 2 * bound) {
      for (StateId t : d.successors(c.s, a)) {
        if (!self(self, Config{m2, t})) return false;
      }
    }
    path.pop_back();
    return true;
  };
  rec(rec, Config{policy.initial_memory(), d.initial()});
  return report;
}

}  // namespace fairplan
