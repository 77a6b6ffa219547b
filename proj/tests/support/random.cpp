#include "support/random.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fairplan::testing {

namespace {

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

}  // namespace

Formula random_formula(Rng& rng, const std::vector<std::string>& atoms, int depth, bool temporal) {
  if (depth <= 0 || pick(rng, 0, 4) == 0) {
    const std::size_t k = pick(rng, 0, atoms.size() + 1);
    if (k == atoms.size()) return Formula::tt();
    if (k == atoms.size() + 1) return Formula::ff();
    return Formula::atom(atoms[k]);
  }
  const std::size_t ops = temporal ? 10 : 5;
  auto sub = [&] { return random_formula(rng, atoms, depth - 1, temporal); };
  switch (pick(rng, 0, ops - 1)) {
    case 0: return Formula::lnot(sub());
    case 1: return Formula::land(sub(), sub());
    case 2: return Formula::lor(sub(), sub());
    case 3: return Formula::implies(sub(), sub());
    case 4: return Formula::lnot(Formula::land(sub(), sub()));
    case 5: return Formula::next(sub());
    case 6: return Formula::until(sub(), sub());
    case 7: return Formula::release(sub(), sub());
    case 8: return Formula::eventually(sub());
    default: return Formula::always(sub());
  }
}

Lasso random_lasso(Rng& rng, const std::vector<Letter>& letters, std::size_t max_prefix,
                   std::size_t max_loop) {
  Lasso w;
  const std::size_t p = pick(rng, 0, max_prefix);
  const std::size_t l = pick(rng, 1, max_loop);
  for (std::size_t i = 0; i < p; ++i) w.prefix.push_back(letters[pick(rng, 0, letters.size() - 1)]);
  for (std::size_t i = 0; i < l; ++i) w.loop.push_back(letters[pick(rng, 0, letters.size() - 1)]);
  return w;
}

Domain random_domain(Rng& rng, DomainShape shape) {
  const std::size_t n = pick(rng, 1, shape.max_states);
  const std::size_t m = pick(rng, 1, shape.max_actions);
  std::vector<Letter> valuations(8);
  for (std::size_t i = 0; i < 8; ++i) valuations[i] = i;
  std::shuffle(valuations.begin(), valuations.end(), rng);
  std::vector<Letter> states(valuations.begin(), valuations.begin() + static_cast<long>(n));
  std::vector<Letter> actions;
  for (std::size_t a = 0; a < m; ++a) actions.push_back(static_cast<Letter>(a) << 3);
  std::vector<Transition> tr;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<ActionId> acts;
    for (std::size_t a = 0; a < m; ++a) {
      if (pick(rng, 0, 1)) acts.push_back(static_cast<ActionId>(a));
    }
    if (acts.empty()) acts.push_back(static_cast<ActionId>(pick(rng, 0, m - 1)));
    for (ActionId a : acts) {
      std::set<StateId> outs;
      const std::size_t k = pick(rng, 1, shape.max_outcomes);
      while (outs.size() < std::min(k, n)) outs.insert(static_cast<StateId>(pick(rng, 0, n - 1)));
      for (StateId t : outs) tr.push_back({static_cast<StateId>(s), a, t});
    }
  }
  return Domain({"f0", "f1", "f2"}, {"a0", "a1"}, states, actions, 0, tr);
}

Lasso random_domain_lasso(Rng& rng, const Domain& d, std::size_t max_prefix, std::size_t max_loop) {
  // Random walk of bounded length, then close at a random earlier position
  // whose state is a successor of the last step.
  for (;;) {
    std::vector<std::pair<StateId, ActionId>> path;
    StateId s = d.initial();
    const std::size_t len = pick(rng, 1, max_prefix + max_loop);
    for (std::size_t i = 0; i < len; ++i) {
      const auto& acts = d.applicable(s);
      const ActionId a = acts[pick(rng, 0, acts.size() - 1)];
      path.push_back({s, a});
      const auto& succ = d.successors(s, a);
      s = succ[pick(rng, 0, succ.size() - 1)];
    }
    std::vector<std::size_t> starts;
    for (std::size_t p = 0; p < len; ++p) {
      if (p <= max_prefix && len - p <= max_loop && path[p].first == s) starts.push_back(p);
    }
    if (starts.empty()) continue;
    const std::size_t p = starts[pick(rng, 0, starts.size() - 1)];
    Lasso w;
    for (std::size_t i = 0; i < len; ++i) {
      (i < p ? w.prefix : w.loop).push_back(d.letter(path[i].first, path[i].second));
    }
    return w;
  }
}

}  // namespace fairplan::testing

namespace fairplan::testing {

RabinGame random_game(Rng& rng, GameShape shape) {
  RabinGame g;
  const std::size_t n = pick(rng, 1, shape.max_agent);
  std::vector<std::vector<int>> env_targets;
  std::vector<std::vector<int>> agent_env(n);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t k = pick(rng, 1, shape.max_actions);
    for (std::size_t a = 0; a < k; ++a) {
      std::set<int> out;
      const std::size_t c = pick(rng, 1, shape.max_choices);
      while (out.size() < std::min(c, n)) out.insert(static_cast<int>(pick(rng, 0, n - 1)));
      agent_env[v].push_back(static_cast<int>(n + env_targets.size()));
      env_targets.emplace_back(out.begin(), out.end());
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    g.agent.push_back(1);
    g.succ.push_back(agent_env[v]);
  }
  for (auto& t : env_targets) {
    g.agent.push_back(0);
    g.succ.push_back(t);
  }
  const std::size_t pairs = pick(rng, 0, shape.max_pairs);
  for (std::size_t j = 0; j < pairs; ++j) {
    RabinPair p;
    for (std::size_t v = 0; v < n; ++v) {
      const auto c = pick(rng, 0, 3);
      if (c == 0) p.inf.push_back(static_cast<int>(v));
      if (c == 1) p.finite.push_back(static_cast<int>(v));
    }
    g.pairs.push_back(p);
  }
  g.initial = 0;
  g.domain_state.assign(g.size(), -1);
  g.automaton_state.assign(g.size(), -1);
  g.action.assign(g.size(), -1);
  return g;
}

}  // namespace fairplan::testing
