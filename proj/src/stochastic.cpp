#include "fairplan/stochastic.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

#include "detail/graph.hpp"
#include "fairplan/error.hpp"

namespace fairplan {

namespace {

using Mask = std::vector<char>;

/// Vertices that can be kept inside `set` forever and from which the set
/// is not left with positive probability: iteratively drop environment
/// vertices with an edge leaving and agent vertices with no edge staying.
Mask closed_part(const RabinGame& g, Mask set) {
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (!set[v]) continue;
      bool keep;
      if (g.agent[v]) {
        keep = std::any_of(g.succ[v].begin(), g.succ[v].end(), [&](int w) { return set[w] != 0; });
      } else {
        keep = std::all_of(g.succ[v].begin(), g.succ[v].end(), [&](int w) { return set[w] != 0; });
      }
      if (!keep) {
        set[v] = 0;
        changed = true;
      }
    }
  }
  return set;
}

/// Layered almost-sure reachability of `target` inside `arena`, which must be
/// closed. Returns the winning part and fills the strategy with edges that
/// decrease the distance to the target.
Mask almost_sure_reach(const RabinGame& g, const Mask& arena, const Mask& target, std::vector<int>& strategy) {
  const std::size_t n = g.size();
  detail::Adjacency pred(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (int w : g.succ[v]) pred[w].push_back(static_cast<int>(v));
  }
  Mask u = arena;
  std::vector<int> dist(n, -1);
  while (true) {
    // Positive-probability reachability inside u, by backward BFS.
    std::fill(dist.begin(), dist.end(), -1);
    std::deque<int> queue;
    for (std::size_t v = 0; v < n; ++v) {
      if (u[v] && target[v]) {
        dist[v] = 0;
        queue.push_back(static_cast<int>(v));
      }
    }
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int p : pred[v]) {
        if (u[p] && dist[p] < 0) {
          dist[p] = dist[v] + 1;
          queue.push_back(p);
        }
      }
    }
    Mask next(n, 0);
    bool shrink = false;
    for (std::size_t v = 0; v < n; ++v) {
      next[v] = u[v] && dist[v] >= 0;
      shrink = shrink || (u[v] && !next[v]);
    }
    if (!shrink) break;
    u = closed_part(g, next);
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!u[v] || !g.agent[v] || target[v]) continue;
    for (int w : g.succ[v]) {
      if (u[w] && dist[w] == dist[v] - 1) {
        strategy[v] = w;
        break;
      }
    }
  }
  return u;
}

std::vector<Mask> pair_masks(const RabinGame& g, bool inf) {
  std::vector<Mask> out;
  for (const auto& p : g.pairs) {
    Mask m(g.size(), 0);
    for (int v : inf ? p.inf : p.finite) m[v] = 1;
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

std::vector<std::vector<int>> maximal_end_components(const RabinGame& g, const std::vector<char>& within) {
  const std::size_t n = g.size();
  std::vector<std::vector<int>> result;
  std::vector<Mask> work{closed_part(g, within)};
  while (!work.empty()) {
    const Mask part = std::move(work.back());
    work.pop_back();
    detail::Adjacency succ(n);
    for (std::size_t v = 0; v < n; ++v) {
      if (!part[v]) continue;
      for (int w : g.succ[v]) {
        if (part[w]) succ[v].push_back(w);
      }
    }
    const auto [comp, ncomp] = detail::scc(succ, part);
    std::vector<Mask> pieces(ncomp, Mask(n, 0));
    for (std::size_t v = 0; v < n; ++v) {
      if (comp[v] >= 0) pieces[comp[v]][v] = 1;
    }
    for (auto& piece : pieces) {
      const Mask closed = closed_part(g, piece);
      if (closed == piece) {
        std::vector<int> members;
        for (std::size_t v = 0; v < n; ++v) {
          if (piece[v]) members.push_back(static_cast<int>(v));
        }
        // A single vertex is an end component only with a self-loop.
        if (members.size() > 1 || std::binary_search(g.succ[members[0]].begin(), g.succ[members[0]].end(), members[0])) {
          result.push_back(std::move(members));
        }
      } else if (std::find(closed.begin(), closed.end(), 1) != closed.end()) {
        work.push_back(closed);
      }
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

WinningCertificate almost_sure_rabin(const RabinGame& g) {
  g.validate();
  const std::size_t n = g.size();
  const auto inf = pair_masks(g, true);
  const auto fin = pair_masks(g, false);
  std::vector<int> strategy(n, -1);
  Mask good(n, 0);
  // Pairs in index order; a vertex keeps the first component it is assigned to.
  for (const auto& mec : maximal_end_components(g, Mask(n, 1))) {
    for (std::size_t j = 0; j < g.pairs.size(); ++j) {
      Mask avoid(n, 0);
      for (int v : mec) avoid[v] = !fin[j][v];
      for (const auto& ec : maximal_end_components(g, avoid)) {
        Mask in(n, 0), goal(n, 0);
        bool hits = false;
        for (int v : ec) {
          in[v] = 1;
          goal[v] = inf[j][v];
          hits = hits || inf[j][v];
        }
        if (!hits) continue;
        std::vector<int> local(n, -1);
        almost_sure_reach(g, in, goal, local);
        for (int v : ec) {
          if (good[v]) continue;
          good[v] = 1;
          if (!g.agent[v]) continue;
          strategy[v] = local[v];
          if (goal[v]) {
            for (int w : g.succ[v]) {
              if (in[w]) {
                strategy[v] = w;
                break;
              }
            }
          }
        }
      }
    }
  }
  WinningCertificate cert;
  cert.region = almost_sure_reach(g, Mask(n, 1), good, strategy);
  cert.winner = cert.region[g.initial] ? Player::Agent : Player::Environment;
  cert.strategy.assign(n, -1);
  for (std::size_t v = 0; v < n; ++v) {
    if (cert.region[v] && g.agent[v]) cert.strategy[v] = strategy[v];
  }
  return cert;
}

PlanOutcome almost_sure_solve(const Domain& domain, const Formula& goal, Dialect dialect, std::size_t max_states) {
  const DRW m = goal_to_drw(goal, dialect, domain, max_states);
  const RabinGame g = product(domain, m);
  const auto cert = almost_sure_rabin(g);
  PlanOutcome out;
  out.game_vertices = g.size();
  out.sat = cert.winner == Player::Agent;
  if (out.sat) out.policy = extract_policy(g, cert, domain);
  return out;
}

namespace {

/// Truth of a Boolean fluent formula in a state.
bool holds_in(const Formula& f, const Domain& d, StateId s) {
  using Op = Formula::Op;
  switch (f.op()) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: {
      const auto i = d.vocabulary().index(f.name());
      return i && (d.state(s) >> *i & 1);
    }
    case Op::Not: return !holds_in(f.lhs(), d, s);
    case Op::And: return holds_in(f.lhs(), d, s) && holds_in(f.rhs(), d, s);
    case Op::Or: return holds_in(f.lhs(), d, s) || holds_in(f.rhs(), d, s);
    case Op::Implies: return !holds_in(f.lhs(), d, s) || holds_in(f.rhs(), d, s);
    default: throw ValidationError("reachability target must be a Boolean combination of fluents");
  }
}

}  // namespace

PlanOutcome strong_cyclic_reachability(const Domain& d, const Formula& target) {
  for (const auto& a : target.atoms()) {
    if (std::find(d.action_vars().begin(), d.action_vars().end(), a) != d.action_vars().end()) {
      throw ValidationError("reachability target mentions the action variable '" + a + "'");
    }
  }
  const std::size_t n = d.num_states();
  Mask goal(n, 0);
  for (std::size_t s = 0; s < n; ++s) goal[s] = holds_in(target, d, static_cast<StateId>(s));

  Mask alive(n, 1);
  std::vector<int> dist(n, -1);
  std::vector<ActionId> choice(n, -1);
  for (bool changed = true; changed;) {
    // Backward search through actions whose outcomes all stay alive.
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(choice.begin(), choice.end(), -1);
    for (std::size_t s = 0; s < n; ++s) {
      if (alive[s] && goal[s]) dist[s] = 0;
    }
    for (int layer = 0;; ++layer) {
      bool grew = false;
      for (std::size_t s = 0; s < n; ++s) {
        if (!alive[s] || dist[s] >= 0) continue;
        for (ActionId a : d.applicable(static_cast<StateId>(s))) {
          const auto& out = d.successors(static_cast<StateId>(s), a);
          const bool safe = std::all_of(out.begin(), out.end(), [&](StateId t) { return alive[t] != 0; });
          const bool closer = std::any_of(out.begin(), out.end(), [&](StateId t) { return dist[t] >= 0 && dist[t] <= layer; });
          if (safe && closer) {
            dist[s] = layer + 1;
            choice[s] = a;
            grew = true;
            break;
          }
        }
      }
      if (!grew) break;
    }
    changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (alive[s] && dist[s] < 0) {
        alive[s] = 0;
        changed = true;
      }
    }
  }
  PlanOutcome out;
  out.sat = alive[d.initial()] != 0;
  if (out.sat) {
    PolicyMachine p(1, n);
    for (std::size_t s = 0; s < n; ++s) {
      const ActionId a = choice[s] >= 0 ? choice[s] : d.applicable(static_cast<StateId>(s))[0];
      p.set(0, static_cast<StateId>(s), a, 0);
    }
    out.policy = std::move(p);
  }
  return out;
}

std::optional<Lasso> almost_sure_audit(const Domain& d, const PolicyMachine& policy, const DRW& goal) {
  validate_policy(policy, d);
  // Markov chain over (memory, state, automaton state); edges follow every outcome.
  struct Node {
    int mem;
    StateId s;
    int q;
    auto operator<=>(const Node&) const = default;
  };
  std::map<Node, int> index;
  std::vector<Node> nodes;
  detail::Adjacency succ;
  auto intern = [&](Node c) {
    auto [it, fresh] = index.emplace(c, static_cast<int>(nodes.size()));
    if (fresh) {
      nodes.push_back(c);
      succ.emplace_back();
    }
    return it->second;
  };
  intern({policy.initial_memory(), d.initial(), goal.initial});
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node c = nodes[i];
    const ActionId a = policy.output(c.mem, c.s);
    const int q2 = goal.next(c.q, goal.alphabet.index(d.letter(c.s, a)));
    const int m2 = policy.update(c.mem, c.s);
    std::vector<int> out;
    for (StateId t : d.successors(c.s, a)) out.push_back(intern({m2, t, q2}));
    succ[i] = std::move(out);
  }
  const std::size_t n = nodes.size();
  const auto [comp, ncomp] = detail::scc(succ);
  std::vector<char> bottom(ncomp, 1);
  for (std::size_t v = 0; v < n; ++v) {
    for (int w : succ[v]) {
      if (comp[w] != comp[v]) bottom[comp[v]] = 0;
    }
  }
  for (int c = 0; c < ncomp; ++c) {
    if (!bottom[c]) continue;
    std::vector<int> members, states;
    for (std::size_t v = 0; v < n; ++v) {
      if (comp[v] == c) {
        members.push_back(static_cast<int>(v));
        states.push_back(nodes[v].q);
      }
    }
    if (goal.rabin_accepts(states)) continue;
    // Witness: shortest path to the component, then a closed walk through all of it.
    auto path_to = [&](int from, const std::function<bool(int)>& stop) {
      std::vector<int> parent(n, -2);
      std::deque<int> queue{from};
      int hit = -1;
      while (!queue.empty() && hit < 0) {
        const int v = queue.front();
        queue.pop_front();
        for (int w : succ[v]) {
          if (parent[w] != -2) continue;
          parent[w] = v;
          if (stop(w)) {
            hit = w;
            break;
          }
          queue.push_back(w);
        }
      }
      std::vector<int> path;  // excludes `from`, ends at the hit
      int v = hit;
      do {
        path.push_back(v);
        v = parent[v];
      } while (v != from);
      std::reverse(path.begin(), path.end());
      return path;
    };
    auto letter_of = [&](int v) { return d.letter(nodes[v].s, policy.output(nodes[v].mem, nodes[v].s)); };
    std::vector<int> prefix{0};
    if (comp[0] != c) {
      auto p = path_to(0, [&](int w) { return comp[w] == c; });
      prefix.insert(prefix.end(), p.begin(), p.end());
    }
    const int start = prefix.back();
    prefix.pop_back();
    std::vector<int> loop{start};
    std::vector<char> seen(n, 0);
    seen[start] = 1;
    for (int target : members) {
      if (seen[target]) continue;
      auto p = path_to(loop.back(), [&](int w) { return w == target; });
      for (int v : p) seen[v] = 1;
      loop.insert(loop.end(), p.begin(), p.end());
    }
    auto back = path_to(loop.back(), [&](int w) { return w == start; });
    back.pop_back();
    loop.insert(loop.end(), back.begin(), back.end());
    Lasso w;
    for (int v : prefix) w.prefix.push_back(letter_of(v));
    for (int v : loop) w.loop.push_back(letter_of(v));
    return w.normalized();
  }
  return std::nullopt;
}

}  // namespace fairplan
