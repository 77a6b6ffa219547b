#include "fairplan/game.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

#include "detail/graph.hpp"
#include "fairplan/error.hpp"

namespace fairplan {

std::size_t RabinGame::num_agent() const {
  return static_cast<std::size_t>(std::count(agent.begin(), agent.end(), 1));
}

std::size_t RabinGame::memory_size() const {
  int m = -1;
  for (int q : automaton_state) m = std::max(m, q);
  return static_cast<std::size_t>(m + 1);
}

void RabinGame::validate() const {
  if (agent.size() != succ.size()) throw InvariantError("game owner table size mismatch");
  if (initial < 0 || static_cast<std::size_t>(initial) >= size()) throw InvariantError("game initial vertex out of range");
  for (std::size_t v = 0; v < size(); ++v) {
    if (succ[v].empty()) throw InvariantError("game vertex " + std::to_string(v) + " has no successor");
    for (int w : succ[v]) {
      if (w < 0 || static_cast<std::size_t>(w) >= size()) throw InvariantError("game edge out of range");
    }
  }
  for (const auto& p : pairs) {
    for (const auto* set : {&p.inf, &p.finite}) {
      for (int v : *set) {
        if (v < 0 || static_cast<std::size_t>(v) >= size()) throw InvariantError("Rabin pair vertex out of range");
      }
    }
  }
}

// ---------------------------------------------------------------- product

namespace {

/// Deterministic automaton seen through integer state ids.
struct Stepper {
  int initial;
  std::function<int(int, std::size_t)> step;
  std::size_t num_pairs;
  std::function<std::pair<bool, bool>(std::size_t, int)> member;  // (in I, in F)
};

RabinGame build_product(const Domain& d, const Alphabet& alphabet, Stepper& m) {
  RabinGame g;
  std::map<std::pair<StateId, int>, int> index;
  std::deque<int> queue;
  auto add_vertex = [&](bool agent, StateId s, int q, ActionId a) {
    const int v = static_cast<int>(g.succ.size());
    g.agent.push_back(agent);
    g.succ.emplace_back();
    g.domain_state.push_back(s);
    g.automaton_state.push_back(q);
    g.action.push_back(a);
    return v;
  };
  auto agent_vertex = [&](StateId s, int q) {
    auto [it, fresh] = index.emplace(std::make_pair(s, q), -1);
    if (fresh) {
      it->second = add_vertex(true, s, q, -1);
      queue.push_back(it->second);
    }
    return it->second;
  };
  g.initial = agent_vertex(d.initial(), m.initial);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    const StateId s = g.domain_state[v];
    const int q = g.automaton_state[v];
    for (ActionId a : d.applicable(s)) {
      const int li = alphabet.find(d.letter(s, a));
      if (li < 0) throw ValidationError("automaton alphabet lacks the domain letter " + d.vocabulary().format(d.letter(s, a)));
      const int e = add_vertex(false, s, q, a);
      g.succ[v].push_back(e);
      const int q2 = m.step(q, static_cast<std::size_t>(li));
      std::vector<int> out;
      for (StateId t : d.successors(s, a)) out.push_back(agent_vertex(t, q2));
      std::sort(out.begin(), out.end());
      g.succ[e] = std::move(out);
    }
  }
  g.pairs.resize(m.num_pairs);
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!g.agent[v]) continue;
    for (std::size_t j = 0; j < m.num_pairs; ++j) {
      const auto [in_i, in_f] = m.member(j, g.automaton_state[v]);
      if (in_i) g.pairs[j].inf.push_back(static_cast<int>(v));
      if (in_f) g.pairs[j].finite.push_back(static_cast<int>(v));
    }
  }
  return g;
}

std::vector<std::vector<char>> membership(const DRW& m) {
  std::vector<std::vector<char>> out;
  for (const auto& p : m.pairs) {
    std::vector<char> row(2 * m.num_states, 0);
    for (int q : p.inf) row[2 * q] = 1;
    for (int q : p.finite) row[2 * q + 1] = 1;
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

RabinGame product(const Domain& domain, const DRW& automaton) {
  const auto member = membership(automaton);
  Stepper m{automaton.initial,
            [&](int q, std::size_t l) { return automaton.next(q, l); },
            automaton.pairs.size(),
            [&](std::size_t j, int q) {
              return std::make_pair(member[j][2 * q] != 0, member[j][2 * q + 1] != 0);
            }};
  return build_product(domain, automaton.alphabet, m);
}

RabinGame product(const Domain& domain, const DRW& a, const DRW& b) {
  if (!(a.alphabet == b.alphabet)) throw ValidationError("DRW union over different alphabets");
  const auto ma = membership(a);
  const auto mb = membership(b);
  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> states;
  auto intern = [&](int p, int q) {
    auto [it, fresh] = index.emplace(std::make_pair(p, q), static_cast<int>(states.size()));
    if (fresh) states.push_back({p, q});
    return it->second;
  };
  const int init = intern(a.initial, b.initial);
  // Pairs of b first, then pairs of a, as in drw_union.
  Stepper m{init,
            [&](int s, std::size_t l) {
              const auto [p, q] = states[s];
              return intern(a.next(p, l), b.next(q, l));
            },
            a.pairs.size() + b.pairs.size(),
            [&](std::size_t j, int s) {
              const auto [p, q] = states[s];
              if (j < b.pairs.size()) return std::make_pair(mb[j][2 * q] != 0, mb[j][2 * q + 1] != 0);
              j -= b.pairs.size();
              return std::make_pair(ma[j][2 * p] != 0, ma[j][2 * p + 1] != 0);
            }};
  return build_product(domain, a.alphabet, m);
}

// ---------------------------------------------------------------- solver

namespace {

using Mask = std::vector<char>;

bool empty(const Mask& m) { return std::find(m.begin(), m.end(), 1) == m.end(); }

class RabinSolver {
 public:
  explicit RabinSolver(const RabinGame& g) : g_(g), n_(g.size()), pred_(n_) {
    for (std::size_t v = 0; v < n_; ++v) {
      for (int w : g.succ[v]) pred_[w].push_back(static_cast<int>(v));
    }
    member_.resize(n_);
    for (std::size_t j = 0; j < g.pairs.size(); ++j) {
      const auto& p = g.pairs[j];
      Mask i(n_, 0), f(n_, 0);
      for (int v : p.inf) i[v] = 1;
      for (int v : p.finite) f[v] = 1;
      for (std::size_t v = 0; v < n_; ++v)
        if (i[v] || f[v]) member_[v].push_back(static_cast<int>(j));
      inf_.push_back(std::move(i));
      fin_.push_back(std::move(f));
    }
  }

  WinningCertificate run() {
    std::vector<int> all(g_.pairs.size());
    for (std::size_t j = 0; j < all.size(); ++j) all[j] = static_cast<int>(j);
    std::vector<int> strategy(n_, -1);
    WinningCertificate cert;
    cert.region = solve(Mask(n_, 1), all, strategy);
    cert.winner = cert.region[g_.initial] ? Player::Agent : Player::Environment;
    cert.strategy.assign(n_, -1);
    for (std::size_t v = 0; v < n_; ++v) {
      if (cert.region[v] && g_.agent[v]) cert.strategy[v] = strategy[v];
    }
    return cert;
  }

 private:
  /// Attractor of `target` inside `arena` for the agent (or the environment).
  /// Newly attracted agent vertices get their lowest-index edge into the set.
  Mask attractor(const Mask& arena, const Mask& target, bool for_agent, std::vector<int>* strategy) const {
    Mask in(n_, 0);
    std::vector<int> count(n_, 0);
    std::deque<int> queue;
    for (std::size_t v = 0; v < n_; ++v) {
      if (!arena[v]) continue;
      for (int w : g_.succ[v]) count[v] += arena[w];
      if (target[v]) {
        in[v] = 1;
        queue.push_back(static_cast<int>(v));
      }
    }
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int u : pred_[v]) {
        if (!arena[u] || in[u]) continue;
        const bool mine = (g_.agent[u] != 0) == for_agent;
        if (!mine && --count[u] > 0) continue;
        in[u] = 1;
        queue.push_back(u);
        if (mine && for_agent && strategy) {
          for (int w : g_.succ[u]) {
            if (in[w]) {
              (*strategy)[u] = w;
              break;
            }
          }
        }
      }
    }
    return in;
  }

  /// Agent vertices of `set` that stay inside `arena` take their lowest edge into it.
  void stay(const Mask& set, const Mask& arena, std::vector<int>& strategy) const {
    for (std::size_t v = 0; v < n_; ++v) {
      if (!set[v] || !g_.agent[v]) continue;
      for (int w : g_.succ[v]) {
        if (arena[w]) {
          strategy[v] = w;
          break;
        }
      }
    }
  }

  /// Splits the arena into strongly connected components and settles them
  /// bottom-up: attraction to already settled vertices first, then the
  /// rest of the component as a separate, smaller game.
  Mask solve(const Mask& arena, std::vector<int> pairs, std::vector<int>& strategy) {
    std::erase_if(pairs, [&](int j) {
      for (std::size_t v = 0; v < n_; ++v) {
        if (arena[v] && inf_[j][v]) return false;
      }
      return true;
    });
    Mask won(n_, 0);
    if (pairs.empty() || empty(arena)) return won;
    const auto [comp, count] = detail::scc(g_.succ, arena);
    if (count == 1) return solve_connected(arena, pairs, strategy);

    std::vector<std::vector<int>> members(count);
    for (std::size_t v = 0; v < n_; ++v)
      if (arena[v]) members[comp[v]].push_back(static_cast<int>(v));
    Mask lost(n_, 0);
    std::vector<char> active(g_.pairs.size(), 0);
    for (int j : pairs) active[j] = 1;
    for (int c = 0; c < count; ++c) {
      const auto& m = members[c];
      std::vector<int> work(m.rbegin(), m.rend());
      while (!work.empty()) {
        const int v = work.back();
        work.pop_back();
        if (won[v] || lost[v]) continue;
        const bool mine = g_.agent[v] != 0;
        int hit = -1;
        bool all = true;
        for (int w : g_.succ[v]) {
          if (!arena[w]) continue;
          if (mine ? won[w] : lost[w]) {
            hit = w;
            break;
          }
          if (!(mine ? lost[w] : won[w])) all = false;
        }
        if (hit < 0 && !all) continue;
        if (mine == (hit >= 0)) {
          won[v] = 1;
          if (mine) strategy[v] = hit;
        } else {
          lost[v] = 1;
        }
        for (int u : pred_[v])
          if (arena[u] && comp[u] == c && !won[u] && !lost[u]) work.push_back(u);
      }
      std::vector<int> rest;
      for (int v : m)
        if (!won[v] && !lost[v]) rest.push_back(v);
      if (rest.empty()) continue;
      // The remaining vertices form a game of their own.
      RabinGame sub;
      for (std::size_t i = 0; i < rest.size(); ++i) local_[rest[i]] = static_cast<int>(i);
      std::map<int, RabinPair> sub_pairs;
      for (int v : rest) {
        sub.agent.push_back(g_.agent[v]);
        auto& out = sub.succ.emplace_back();
        for (int w : g_.succ[v])
          if (arena[w] && comp[w] == c && !won[w] && !lost[w]) out.push_back(local_[w]);
        for (int j : member_[v]) {
          if (!active[j]) continue;
          if (inf_[j][v]) sub_pairs[j].inf.push_back(local_[v]);
          if (fin_[j][v]) sub_pairs[j].finite.push_back(local_[v]);
        }
      }
      for (auto& [j, p] : sub_pairs)
        if (!p.inf.empty()) sub.pairs.push_back(std::move(p));
      const WinningCertificate cert = RabinSolver(sub).run();
      for (std::size_t i = 0; i < rest.size(); ++i) {
        const int v = rest[i];
        if (cert.region[i]) {
          won[v] = 1;
          if (g_.agent[v]) strategy[v] = rest[cert.strategy[i]];
        } else {
          lost[v] = 1;
        }
      }
    }
    return won;
  }

  Mask solve_connected(const Mask& arena, const std::vector<int>& pairs, std::vector<int>& strategy) {
    Mask won(n_, 0);
    for (bool changed = true; changed;) {
      changed = false;
      for (int j : pairs) {
        won = attractor(arena, won, true, &strategy);
        Mask rest(n_, 0), bad(n_, 0);
        for (std::size_t v = 0; v < n_; ++v) {
          rest[v] = arena[v] && !won[v];
          bad[v] = rest[v] && fin_[j][v];
        }
        if (empty(rest)) break;
        const Mask avoid = attractor(rest, bad, false, nullptr);
        Mask h(n_, 0);
        for (std::size_t v = 0; v < n_; ++v) h[v] = rest[v] && !avoid[v];
        std::vector<int> others;
        for (int k : pairs) {
          if (k != j) others.push_back(k);
        }
        const Mask x = win_with_pair(h, j, others, strategy);
        for (std::size_t v = 0; v < n_; ++v) {
          if (x[v]) {
            won[v] = 1;
            changed = true;
          }
        }
      }
    }
    return attractor(arena, won, true, &strategy);
  }

  /// Largest part of `arena` where the agent wins by visiting the pair's I
  /// infinitely often or by winning the remaining pairs; the arena already avoids F.
  Mask win_with_pair(Mask arena, int j, const std::vector<int>& others, std::vector<int>& strategy) {
    while (!empty(arena)) {
      std::vector<int> local(n_, -1);
      Mask goal(n_, 0);
      for (std::size_t v = 0; v < n_; ++v) goal[v] = arena[v] && inf_[j][v];
      if (empty(goal)) break;
      const Mask reach = attractor(arena, goal, true, &local);
      stay(goal, arena, local);
      Mask inner(n_, 0);
      for (std::size_t v = 0; v < n_; ++v) inner[v] = arena[v] && !reach[v];
      const Mask inner_won = solve(inner, others, local);
      Mask lose(n_, 0);
      for (std::size_t v = 0; v < n_; ++v) lose[v] = inner[v] && !inner_won[v];
      if (empty(lose)) {
        for (std::size_t v = 0; v < n_; ++v) {
          if (arena[v] && g_.agent[v]) strategy[v] = local[v];
        }
        return arena;
      }
      const Mask cut = attractor(arena, lose, false, nullptr);
      for (std::size_t v = 0; v < n_; ++v) arena[v] = arena[v] && !cut[v];
    }
    return Mask(n_, 0);
  }

  const RabinGame& g_;
  std::size_t n_;
  std::vector<std::vector<int>> pred_;
  std::vector<Mask> inf_, fin_;
  std::vector<std::vector<int>> member_;  // pairs mentioning each vertex
  std::vector<int> local_ = std::vector<int>(n_, -1);
};

/// Vertices lying on a cycle of the (restricted) graph that violates every pair.
Mask bad_cycle_vertices(const detail::Adjacency& succ, const Mask& alive, const RabinGame& g) {
  const std::size_t n = succ.size();
  std::vector<Mask> inf, fin;
  for (const auto& p : g.pairs) {
    Mask i(n, 0), f(n, 0);
    for (int v : p.inf) i[v] = 1;
    for (int v : p.finite) f[v] = 1;
    inf.push_back(std::move(i));
    fin.push_back(std::move(f));
  }
  Mask bad(n, 0);
  std::vector<Mask> work{alive};
  while (!work.empty()) {
    const Mask part = std::move(work.back());
    work.pop_back();
    const auto [comp, ncomp] = detail::scc(succ, part);
    std::vector<std::vector<int>> members(ncomp);
    for (std::size_t v = 0; v < n; ++v) {
      if (comp[v] >= 0) members[comp[v]].push_back(static_cast<int>(v));
    }
    for (const auto& c : members) {
      bool cyclic = c.size() > 1;
      for (int w : succ[c[0]]) cyclic = cyclic || w == c[0];
      if (!cyclic) continue;
      int good = -1;
      for (std::size_t j = 0; j < inf.size() && good < 0; ++j) {
        bool hits_i = false, hits_f = false;
        for (int v : c) {
          hits_i = hits_i || inf[j][v];
          hits_f = hits_f || fin[j][v];
        }
        if (hits_i && !hits_f) good = static_cast<int>(j);
      }
      if (good < 0) {
        for (int v : c) bad[v] = 1;
        continue;
      }
      Mask sub(n, 0);
      for (int v : c) sub[v] = !inf[good][v];
      work.push_back(std::move(sub));
    }
  }
  return bad;
}

detail::Adjacency restrict(const RabinGame& g, const std::vector<int>& strategy) {
  detail::Adjacency succ(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!g.agent[v]) {
      succ[v] = g.succ[v];
    } else if (strategy[v] >= 0) {
      succ[v] = {strategy[v]};
    }
  }
  return succ;
}

/// Vertices from which the strategy avoids every bad cycle (and never gets stuck).
Mask winning_from(const RabinGame& g, const std::vector<int>& strategy) {
  const auto succ = restrict(g, strategy);
  const std::size_t n = g.size();
  Mask losing = bad_cycle_vertices(succ, Mask(n, 1), g);
  for (std::size_t v = 0; v < n; ++v) {
    if (g.agent[v] && strategy[v] < 0) losing[v] = 1;
  }
  detail::Adjacency pred(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (int w : succ[v]) pred[w].push_back(static_cast<int>(v));
  }
  std::vector<int> sources;
  for (std::size_t v = 0; v < n; ++v) {
    if (losing[v]) sources.push_back(static_cast<int>(v));
  }
  const Mask reaches_bad = detail::reachable(pred, sources);
  Mask win(n, 0);
  for (std::size_t v = 0; v < n; ++v) win[v] = !reaches_bad[v];
  return win;
}

}  // namespace

WinningCertificate solve_rabin(const RabinGame& game) {
  game.validate();
  return RabinSolver(game).run();
}

WinningCertificate brute_force_rabin(const RabinGame& game) {
  game.validate();
  std::vector<int> choice_vertices;
  for (std::size_t v = 0; v < game.size(); ++v) {
    if (game.agent[v] && game.succ[v].size() > 1) choice_vertices.push_back(static_cast<int>(v));
  }
  if (choice_vertices.size() > kBruteForceMaxChoices) {
    throw CapacityError("brute-force solver limited to " + std::to_string(kBruteForceMaxChoices) +
                        " agent vertices with a choice");
  }
  std::vector<int> strategy(game.size(), -1);
  for (std::size_t v = 0; v < game.size(); ++v) {
    if (game.agent[v]) strategy[v] = game.succ[v][0];
  }
  std::vector<std::size_t> digit(choice_vertices.size(), 0);
  WinningCertificate cert;
  cert.region.assign(game.size(), 0);
  bool found = false;
  while (true) {
    const Mask win = winning_from(game, strategy);
    for (std::size_t v = 0; v < game.size(); ++v) cert.region[v] = cert.region[v] || win[v];
    if (!found && win[game.initial]) {
      found = true;
      cert.strategy = strategy;
    }
    std::size_t k = 0;
    while (k < digit.size()) {
      const int v = choice_vertices[k];
      if (++digit[k] < game.succ[v].size()) {
        strategy[v] = game.succ[v][digit[k]];
        break;
      }
      digit[k] = 0;
      strategy[v] = game.succ[v][0];
      ++k;
    }
    if (k == digit.size()) break;
  }
  cert.winner = found ? Player::Agent : Player::Environment;
  if (!found) cert.strategy.assign(game.size(), -1);
  return cert;
}

bool strategy_is_winning(const RabinGame& game, const std::vector<int>& strategy, int from) {
  for (std::size_t v = 0; v < game.size(); ++v) {
    if (game.agent[v] && strategy[v] >= 0 &&
        !std::binary_search(game.succ[v].begin(), game.succ[v].end(), strategy[v])) {
      return false;
    }
  }
  return winning_from(game, strategy)[from] != 0;
}

PolicyMachine extract_policy(const RabinGame& game, const WinningCertificate& cert, const Domain& domain) {
  if (cert.winner != Player::Agent) throw ValidationError("the certificate is environment-winning");
  PolicyMachine policy(game.memory_size(), domain.num_states(), game.automaton_state[game.initial]);
  for (std::size_t v = 0; v < game.size(); ++v) {
    if (!game.agent[v] || !cert.region[v] || cert.strategy[v] < 0) continue;
    const int e = cert.strategy[v];
    const int next_memory = game.automaton_state[game.succ[e][0]];
    policy.set(game.automaton_state[v], game.domain_state[v], game.action[e], next_memory);
  }
  return policy;
}

}  // namespace fairplan
