#include "fairplan/automata.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <deque>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "detail/bdd.hpp"
#include "detail/graph.hpp"
#include "detail/nnf.hpp"
#include "fairplan/error.hpp"

namespace fairplan {

using detail::BddManager;
using detail::NnfDag;
using Kind = NnfDag::Kind;

// ---------------------------------------------------------------- alphabet

Alphabet::Alphabet(Vocabulary vocab, std::vector<Letter> letters)
    : vocab_(std::move(vocab)), letters_(std::move(letters)) {
  std::sort(letters_.begin(), letters_.end());
  letters_.erase(std::unique(letters_.begin(), letters_.end()), letters_.end());
  if (letters_.size() > kMaxAlphabetLetters) throw CapacityError("alphabet exceeds 2^20 letters");
}

Alphabet Alphabet::powerset(Vocabulary vocab) {
  if (vocab.size() > 20) {
    throw CapacityError("alphabet over " + std::to_string(vocab.size()) +
                        " propositions exceeds 2^20 letters");
  }
  std::vector<Letter> letters(std::size_t{1} << vocab.size());
  for (std::size_t i = 0; i < letters.size(); ++i) letters[i] = i;
  return Alphabet(std::move(vocab), std::move(letters));
}

Alphabet Alphabet::of_formula(const Formula& phi) {
  const auto atoms = phi.atoms();
  return powerset(Vocabulary(std::vector<std::string>(atoms.begin(), atoms.end())));
}

Alphabet Alphabet::of_domain(const Domain& domain) {
  return Alphabet(domain.vocabulary(), domain.realizable_letters());
}

int Alphabet::find(Letter letter) const {
  auto it = std::lower_bound(letters_.begin(), letters_.end(), letter);
  if (it == letters_.end() || *it != letter) return -1;
  return static_cast<int>(it - letters_.begin());
}

std::size_t Alphabet::index(Letter letter) const {
  const int i = find(letter);
  if (i < 0) throw ValidationError("letter " + vocab_.format(letter) + " is outside the alphabet");
  return static_cast<std::size_t>(i);
}

namespace {

void check_budget(std::size_t states, std::size_t max_states, const char* what) {
  if (states > max_states) {
    throw CapacityError(std::string(what) + " exceeds the state budget of " +
                        std::to_string(max_states));
  }
}

bool intersects(const std::vector<int>& sorted, const std::vector<char>& member) {
  for (int q : sorted) {
    if (member[q]) return true;
  }
  return false;
}

}  // namespace

bool DFW::accepts(const FiniteTrace& trace) const {
  if (trace.letters.empty()) return false;
  int q = initial;
  for (Letter l : trace.letters) q = next(q, alphabet.index(l));
  return accepting[q] != 0;
}

bool DRW::rabin_accepts(const std::vector<int>& recurring) const {
  std::vector<char> member(num_states, 0);
  for (int q : recurring) member[q] = 1;
  for (const auto& p : pairs) {
    if (intersects(p.inf, member) && !intersects(p.finite, member)) return true;
  }
  return false;
}

bool NBW::accepts(const Lasso& word) const {
  const std::size_t len = word.length();
  std::vector<std::size_t> letter(len);
  for (std::size_t i = 0; i < len; ++i) letter[i] = alphabet.index(word.at(i));
  // node = q * len + position
  const std::size_t n = num_states * len;
  detail::Adjacency succ(n);
  for (std::size_t q = 0; q < num_states; ++q) {
    for (std::size_t i = 0; i < len; ++i) {
      for (int r : next(static_cast<int>(q), letter[i])) {
        succ[q * len + i].push_back(static_cast<int>(r * len + word.next(i)));
      }
    }
  }
  const auto alive = detail::reachable(succ, {static_cast<int>(initial * len)});
  const auto [comp, ncomp] = detail::scc(succ, alive);
  std::vector<int> comp_size(ncomp, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (comp[v] >= 0) ++comp_size[comp[v]];
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (comp[v] < 0 || !accepting[v / len]) continue;
    if (comp_size[comp[v]] > 1) return true;
    for (int w : succ[v]) {
      if (w == static_cast<int>(v)) return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------- LTLf -> DFW

namespace {

/// Moore refinement; `rep` holds one letter per class of letters with equal
/// columns. The empty trace is never evaluated, so the initial state only has
/// to agree with its block on outgoing rows, unless some edge enters it.
void minimize(DFW& dfw, const std::vector<std::size_t>& rep) {
  const std::size_t n = dfw.num_states;
  const std::size_t k = dfw.alphabet.size();
  const bool entered = std::find(dfw.delta.begin(), dfw.delta.end(), dfw.initial) != dfw.delta.end();
  std::vector<int> block(n);
  for (std::size_t q = 0; q < n; ++q) block[q] = dfw.accepting[q] ? 1 : 0;
  if (!entered) block[dfw.initial] = 2;
  std::size_t count = 0;
  while (true) {
    std::map<std::vector<int>, int> ids;
    std::vector<int> next(n);
    for (std::size_t q = 0; q < n; ++q) {
      std::vector<int> sig;
      sig.reserve(rep.size() + 1);
      sig.push_back(entered || static_cast<int>(q) != dfw.initial ? block[q] : -1);
      for (std::size_t c : rep) sig.push_back(block[dfw.delta[q * k + c]]);
      next[q] = ids.emplace(std::move(sig), static_cast<int>(ids.size())).first->second;
    }
    const std::size_t before = count;
    count = ids.size();
    block = std::move(next);
    if (count == before) break;
  }
  if (!entered) {
    // The initial state joins any block with the same outgoing row.
    std::map<std::vector<int>, int> rows;
    for (std::size_t q = 0; q < n; ++q) {
      if (static_cast<int>(q) == dfw.initial) continue;
      std::vector<int> row;
      for (std::size_t c : rep) row.push_back(block[dfw.delta[q * k + c]]);
      rows.emplace(row, block[q]);
    }
    std::vector<int> row;
    for (std::size_t c : rep) row.push_back(block[dfw.delta[dfw.initial * k + c]]);
    if (auto it = rows.find(row); it != rows.end()) {
      const int old = block[dfw.initial];
      block[dfw.initial] = it->second;
      bool alone = std::count(block.begin(), block.end(), old) == 0;
      if (alone) {
        for (auto& b : block) if (b > old) --b;
        --count;
      }
    }
  }
  // Renumber blocks by first occurrence, keeping the initial block first.
  std::vector<int> order(count, -1);
  int fresh = 0;
  order[block[dfw.initial]] = fresh++;
  for (std::size_t q = 0; q < n; ++q)
    if (order[block[q]] < 0) order[block[q]] = fresh++;
  DFW out;
  out.alphabet = dfw.alphabet;
  out.num_states = count;
  out.initial = 0;
  out.delta.assign(count * k, 0);
  out.accepting.assign(count, false);
  for (std::size_t q = 0; q < n; ++q) {
    const int b = order[block[q]];
    out.accepting[b] = dfw.accepting[q];
    for (std::size_t l = 0; l < k; ++l) out.delta[b * k + l] = order[block[dfw.delta[q * k + l]]];
  }
  for (std::size_t q = 0; q < n; ++q)
    if (static_cast<int>(q) != dfw.initial) out.accepting[order[block[q]]] = dfw.accepting[q];
  dfw = std::move(out);
}

std::uint64_t pair_key(StateId s, int q) {
  return static_cast<std::uint64_t>(static_cast<std::uint32_t>(s)) << 32 | static_cast<std::uint32_t>(q);
}

/// Automaton built over the domain, with the (domain state, automaton state)
/// pairs from which it can still produce the wanted verdict.
struct ContextPart {
  const DFW* dfw = nullptr;
  std::vector<char> fixed;  // 1: absorbing with the wanted verdict, 2: absorbing otherwise
  std::unordered_set<std::uint64_t> live;

  bool holds(StateId s, int q) const {
    if (fixed[q] != 0) return fixed[q] == 1;
    return live.count(pair_key(s, q)) != 0;
  }
};
using Context = std::vector<const ContextPart*>;

struct TupleHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = v.size();
    for (int x : v) h = h * 0x9e3779b97f4a7c15ULL + static_cast<std::uint32_t>(x) + (h >> 29);
    return h;
  }
};

/// Breadth-first walk over (domain state, context states, q). Tuples where a
/// context part can no longer produce its verdict, or where q is terminal,
/// are not expanded.
template <class Step, class Terminal, class Edge>
void explore(const Domain& domain, const Alphabet& alphabet, const Context& ctx, int q0, Step step,
             Terminal terminal, Edge edge) {
  const std::size_t m = ctx.size();
  std::vector<int> start{domain.initial()};
  for (const auto* part : ctx) start.push_back(part->dfw->initial);
  start.push_back(q0);
  std::unordered_set<std::vector<int>, TupleHash> seen{start};
  std::deque<std::vector<int>> work{start};
  std::vector<int> next(m + 2);
  while (!work.empty()) {
    const std::vector<int> cur = std::move(work.front());
    work.pop_front();
    const StateId s = cur[0];
    const int q = cur[m + 1];
    if (terminal(q)) continue;
    bool alive = true;
    for (std::size_t i = 0; i < m && alive; ++i) alive = ctx[i]->holds(s, cur[i + 1]);
    if (!alive) continue;
    for (ActionId a : domain.applicable(s)) {
      const std::size_t li = alphabet.index(domain.letter(s, a));
      const int r = step(s, q, li);
      for (std::size_t i = 0; i < m; ++i) next[i + 1] = ctx[i]->dfw->next(cur[i + 1], li);
      next[m + 1] = r;
      for (StateId t : domain.successors(s, a)) {
        edge(s, q, t, r);
        next[0] = t;
        if (seen.insert(next).second) work.push_back(next);
      }
    }
  }
}

ContextPart make_part(const DFW& dfw, const Domain& domain, const Context& ctx, bool want) {
  ContextPart part;
  part.dfw = &dfw;
  const std::size_t k = dfw.alphabet.size();
  part.fixed.assign(dfw.num_states, 0);
  for (std::size_t q = 0; q < dfw.num_states; ++q) {
    bool loop = true;
    for (std::size_t l = 0; l < k && loop; ++l) loop = dfw.next(static_cast<int>(q), l) == static_cast<int>(q);
    if (loop) part.fixed[q] = (dfw.accepting[q] != 0) == want ? 1 : 2;
  }
  std::unordered_map<std::uint64_t, int> id;
  std::vector<std::uint64_t> keys;
  std::vector<std::vector<int>> preds;
  std::vector<char> good;
  auto node = [&](StateId s, int q) {
    auto [it, fresh] = id.emplace(pair_key(s, q), static_cast<int>(keys.size()));
    if (fresh) {
      keys.push_back(pair_key(s, q));
      preds.emplace_back();
      good.push_back(0);
    }
    return it->second;
  };
  explore(
      domain, dfw.alphabet, ctx, dfw.initial, [&](StateId, int q, std::size_t li) { return dfw.next(q, li); },
      [&](int q) { return part.fixed[q] != 0; },
      [&](StateId s, int q, StateId t, int r) {
        const int u = node(s, q);
        if ((dfw.accepting[r] != 0) == want) good[u] = 1;
        if (part.fixed[r] == 0) preds[node(t, r)].push_back(u);
      });
  std::vector<int> work;
  for (std::size_t u = 0; u < good.size(); ++u)
    if (good[u]) work.push_back(static_cast<int>(u));
  while (!work.empty()) {
    const int v = work.back();
    work.pop_back();
    for (int u : preds[v]) {
      if (!good[u]) {
        good[u] = 1;
        work.push_back(u);
      }
    }
  }
  for (std::size_t u = 0; u < good.size(); ++u)
    if (good[u]) part.live.insert(keys[u]);
  return part;
}

/// Progression construction. With a domain, only (domain state, context,
/// automaton state) tuples reachable together are expanded and the remaining
/// entries lead to a rejecting trap.
DFW progression_dfw(const Formula& phi, const Alphabet& alphabet, std::size_t max_states, const Domain* domain,
                    const Context& ctx = {}) {
  NnfDag dag(alphabet.vocabulary(), Dialect::Ltlf);
  const int root = dag.build(phi);
  // Letters that agree on the atoms of phi progress alike.
  Letter seen = 0;
  for (const auto& a : phi.atoms()) {
    if (auto i = alphabet.vocabulary().index(a)) seen |= Letter{1} << *i;
  }
  std::vector<std::size_t> cls(alphabet.size());
  std::vector<std::size_t> rep;
  {
    std::unordered_map<Letter, std::size_t> by_mask;
    for (std::size_t li = 0; li < alphabet.size(); ++li) {
      auto [it, fresh] = by_mask.emplace(alphabet[li] & seen, rep.size());
      if (fresh) rep.push_back(li);
      cls[li] = it->second;
    }
  }
  BddManager bdd;
  // Variable 2k: "a next position exists and satisfies node k"; 2k+1: the weak form.
  std::unordered_map<std::uint64_t, BddManager::Ref> memo;
  auto expand = [&](auto&& self, int id, std::size_t c) -> BddManager::Ref {
    const std::uint64_t key = static_cast<std::uint64_t>(id) << 24 | c;
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const auto& n = dag.node(id);
    const Letter letter = alphabet[rep[c]];
    BddManager::Ref r = BddManager::kFalse;
    switch (n.kind) {
      case Kind::True: r = BddManager::kTrue; break;
      case Kind::False: r = BddManager::kFalse; break;
      case Kind::Lit:
      case Kind::NLit: r = dag.holds(id, letter) ? BddManager::kTrue : BddManager::kFalse; break;
      case Kind::And:
        r = BddManager::kTrue;
        for (int a : n.args) {
          r = bdd.land(r, self(self, a, c));
          if (r == BddManager::kFalse) break;
        }
        break;
      case Kind::Or:
        for (int a : n.args) {
          r = bdd.lor(r, self(self, a, c));
          if (r == BddManager::kTrue) break;
        }
        break;
      case Kind::Next: r = bdd.var(2 * n.lhs); break;
      case Kind::WeakNext: r = bdd.var(2 * n.lhs + 1); break;
      case Kind::Until:
        r = bdd.lor(self(self, n.rhs, c), bdd.land(self(self, n.lhs, c), bdd.var(2 * id)));
        break;
      case Kind::Release:
        r = bdd.land(self(self, n.rhs, c), bdd.lor(self(self, n.lhs, c), bdd.var(2 * id + 1)));
        break;
    }
    memo.emplace(key, r);
    return r;
  };

  DFW dfw;
  dfw.alphabet = alphabet;
  std::unordered_map<BddManager::Ref, int> index;
  std::vector<BddManager::Ref> states;
  auto intern = [&](BddManager::Ref f) {
    auto [it, fresh] = index.emplace(f, static_cast<int>(states.size()));
    if (fresh) {
      states.push_back(f);
      check_budget(states.size(), max_states, "DFW");
    }
    return it->second;
  };
  const std::size_t k = alphabet.size();
  std::vector<std::vector<int>> by_class;
  auto step = [&](int q, std::size_t li) {
    if (by_class.size() <= static_cast<std::size_t>(q)) by_class.resize(q + 1);
    auto& row = by_class[q];
    if (row.empty()) row.assign(rep.size(), -1);
    int& r = row[cls[li]];
    if (r < 0) {
      const auto f = states[q];
      const auto g = bdd.compose(f, [&](int v) { return expand(expand, v / 2, cls[li]); });
      r = intern(g);
    }
    return r;
  };
  intern(bdd.var(2 * root));
  if (domain) {
    explore(
        *domain, alphabet, ctx, 0, [&](StateId, int q, std::size_t li) { return step(q, li); },
        [&](int q) { return states[q] == BddManager::kTrue || states[q] == BddManager::kFalse; },
        [](StateId, int, StateId, int) {});
    const int trap = intern(BddManager::kFalse);
    dfw.delta.assign(states.size() * k, trap);
    for (std::size_t q = 0; q < states.size(); ++q) {
      if (states[q] == BddManager::kTrue) {
        std::fill_n(dfw.delta.begin() + q * k, k, static_cast<int>(q));
        continue;
      }
      if (q >= by_class.size() || by_class[q].empty()) continue;
      for (std::size_t li = 0; li < k; ++li) {
        if (by_class[q][cls[li]] >= 0) dfw.delta[q * k + li] = by_class[q][cls[li]];
      }
    }
  } else {
    for (std::size_t q = 0; q < states.size(); ++q) {
      for (std::size_t li = 0; li < k; ++li) dfw.delta.push_back(step(static_cast<int>(q), li));
    }
  }
  dfw.num_states = states.size();
  dfw.initial = 0;
  dfw.accepting.resize(states.size());
  for (std::size_t q = 0; q < states.size(); ++q) {
    dfw.accepting[q] = bdd.eval(states[q], [](int v) { return (v & 1) != 0; });
  }
  minimize(dfw, rep);
  return dfw;
}

}  // namespace

DFW ltlf_to_dfw(const Formula& phi, const Alphabet& alphabet, std::size_t max_states) {
  return progression_dfw(phi, alphabet, max_states, nullptr);
}

namespace {

/// Boolean combination of a and b. Once a can no longer produce the verdict
/// that leaves the result open, the result moves to a fixed sink.
DFW combine(const DFW& a, const ContextPart& a_part, const DFW& b, Formula::Op op, const Domain& domain,
            const Context& ctx, std::size_t max_states) {
  const Alphabet& alphabet = a.alphabet;
  const std::size_t k = alphabet.size();
  DFW out;
  out.alphabet = alphabet;
  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> states;
  auto intern = [&](int p, int q) {
    auto [it, fresh] = index.emplace(std::make_pair(p, q), static_cast<int>(states.size()));
    if (fresh) {
      states.push_back({p, q});
      check_budget(states.size(), max_states, "DFW");
      out.delta.resize(states.size() * k, -1);
    }
    return it->second;
  };
  intern(a.initial, b.initial);
  const int sink_false = intern(-1, -1);
  const int sink_true = intern(-2, -2);
  const int settled = op == Formula::Op::And ? sink_false : sink_true;
  explore(
      domain, alphabet, ctx, 0,
      [&](StateId s, int v, std::size_t li) {
        if (out.delta[v * k + li] < 0) {
          const auto [p, q] = states[v];
          const int r = a_part.holds(s, p) ? intern(a.next(p, li), b.next(q, li)) : settled;
          out.delta[v * k + li] = r;
        }
        return out.delta[v * k + li];
      },
      [&](int v) { return v == sink_false || v == sink_true; }, [](StateId, int, StateId, int) {});
  out.num_states = states.size();
  for (std::size_t l = 0; l < k; ++l) {
    out.delta[sink_false * k + l] = sink_false;
    out.delta[sink_true * k + l] = sink_true;
  }
  for (auto& r : out.delta)
    if (r < 0) r = sink_false;
  out.accepting.assign(out.num_states, false);
  for (std::size_t v = 0; v < states.size(); ++v) {
    const auto [p, q] = states[v];
    if (p < 0) {
      out.accepting[v] = p == -2;
      continue;
    }
    const bool x = a.accepting[p];
    const bool y = b.accepting[q];
    out.accepting[v] = op == Formula::Op::And ? (x && y) : op == Formula::Op::Or ? (x || y) : (!x || y);
  }
  std::vector<std::size_t> rep(k);
  for (std::size_t l = 0; l < k; ++l) rep[l] = l;
  minimize(out, rep);
  return out;
}

DFW build_on(const Formula& phi, const Domain& domain, const Context& ctx, std::size_t max_states) {
  switch (phi.op()) {
    case Formula::Op::Not: {
      DFW d = build_on(phi.lhs(), domain, ctx, max_states);
      for (std::size_t q = 0; q < d.num_states; ++q) d.accepting[q] = !d.accepting[q];
      return d;
    }
    case Formula::Op::And:
    case Formula::Op::Or:
    case Formula::Op::Implies: {
      const DFW a = build_on(phi.lhs(), domain, ctx, max_states);
      const ContextPart part = make_part(a, domain, ctx, phi.op() != Formula::Op::Or);
      Context inner = ctx;
      inner.push_back(&part);
      const DFW b = build_on(phi.rhs(), domain, inner, max_states);
      return combine(a, part, b, phi.op(), domain, ctx, max_states);
    }
    default:
      return progression_dfw(phi, Alphabet::of_domain(domain), max_states, &domain, ctx);
  }
}

}  // namespace

DFW ltlf_to_dfw_on(const Formula& phi, const Domain& domain, std::size_t max_states) {
  return build_on(phi, domain, {}, max_states);
}

DFW ltlf_to_dfw(const Formula& phi) { return ltlf_to_dfw(phi, Alphabet::of_formula(phi)); }

DRW dfw_to_drw(const DFW& dfw) {
  DRW drw;
  drw.alphabet = dfw.alphabet;
  const std::size_t k = dfw.alphabet.size();
  const int sink = static_cast<int>(dfw.num_states);
  drw.num_states = dfw.num_states + 1;
  drw.initial = dfw.initial;
  drw.delta.resize(drw.num_states * k);
  for (std::size_t q = 0; q < dfw.num_states; ++q) {
    for (std::size_t l = 0; l < k; ++l) {
      const int r = dfw.next(static_cast<int>(q), l);
      drw.delta[q * k + l] = dfw.accepting[r] ? sink : r;
    }
  }
  for (std::size_t l = 0; l < k; ++l) drw.delta[sink * k + l] = sink;
  drw.pairs.push_back({{sink}, {}});
  return drw;
}

// ---------------------------------------------------------------- LTL -> NBW

namespace {

/// One way of satisfying a set of obligations at the current position:
/// what must hold from the next position on, and which untils were deferred.
struct Choice {
  std::vector<int> next;
  std::vector<int> deferred;
  bool operator==(const Choice&) const = default;
  auto operator<=>(const Choice&) const = default;
};

std::vector<int> merge(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<Choice> product(const std::vector<Choice>& a, const std::vector<Choice>& b) {
  std::vector<Choice> out;
  for (const auto& x : a) {
    for (const auto& y : b) out.push_back({merge(x.next, y.next), merge(x.deferred, y.deferred)});
  }
  return out;
}

/// Sort, dedupe and drop choices dominated by a choice with fewer obligations and deferrals.
void prune(std::vector<Choice>& cs) {
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  std::vector<Choice> keep;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < cs.size() && !dominated; ++j) {
      if (i == j) continue;
      const bool sub_next = std::includes(cs[i].next.begin(), cs[i].next.end(), cs[j].next.begin(), cs[j].next.end());
      const bool sub_def = std::includes(cs[i].deferred.begin(), cs[i].deferred.end(),
                                         cs[j].deferred.begin(), cs[j].deferred.end());
      dominated = sub_next && sub_def && (cs[i] != cs[j]);
    }
    if (!dominated) keep.push_back(cs[i]);
  }
  cs = std::move(keep);
}

}  // namespace

NBW ltl_to_nbw(const Formula& phi, const Alphabet& alphabet, std::size_t max_states) {
  NnfDag dag(alphabet.vocabulary(), Dialect::Ltl);
  const int root = dag.build(phi);

  std::vector<int> untils;
  {
    std::vector<char> seen(dag.size(), 0);
    std::vector<int> work{root};
    seen[root] = 1;
    while (!work.empty()) {
      const int v = work.back();
      work.pop_back();
      const auto& n = dag.node(v);
      if (n.kind == Kind::Until) untils.push_back(v);
      std::vector<int> kids = n.args;
      if (n.lhs >= 0) kids.push_back(n.lhs);
      if (n.rhs >= 0) kids.push_back(n.rhs);
      for (int c : kids) {
        if (!seen[c]) {
          seen[c] = 1;
          work.push_back(c);
        }
      }
    }
    std::sort(untils.begin(), untils.end());
  }
  const std::size_t k = untils.size();

  std::map<std::pair<int, std::size_t>, std::vector<Choice>> memo;
  auto expand = [&](auto&& self, int id, std::size_t li) -> std::vector<Choice> {
    if (auto it = memo.find({id, li}); it != memo.end()) return it->second;
    const auto& n = dag.node(id);
    std::vector<Choice> r;
    switch (n.kind) {
      case Kind::True: r = {Choice{}}; break;
      case Kind::False: break;
      case Kind::Lit:
      case Kind::NLit:
        if (dag.holds(id, alphabet[li])) r = {Choice{}};
        break;
      case Kind::And:
        r = {Choice{}};
        for (int a : n.args) r = product(r, self(self, a, li));
        break;
      case Kind::Or:
        for (int a : n.args) {
          auto c = self(self, a, li);
          r.insert(r.end(), c.begin(), c.end());
        }
        break;
      case Kind::Next:
      case Kind::WeakNext: r = {Choice{{n.lhs}, {}}}; break;
      case Kind::Until:
        r = self(self, n.rhs, li);
        for (auto c : self(self, n.lhs, li)) {
          c.next = merge(c.next, {id});
          c.deferred = merge(c.deferred, {id});
          r.push_back(std::move(c));
        }
        break;
      case Kind::Release: {
        auto stay = self(self, n.lhs, li);
        stay.push_back(Choice{{id}, {}});
        r = product(self(self, n.rhs, li), stay);
        break;
      }
    }
    prune(r);
    memo.emplace(std::make_pair(id, li), r);
    return r;
  };

  NBW nbw;
  nbw.alphabet = alphabet;
  std::map<std::pair<std::vector<int>, std::size_t>, int> index;
  std::vector<std::pair<std::vector<int>, std::size_t>> states;
  auto intern = [&](std::vector<int> set, std::size_t level) {
    auto key = std::make_pair(std::move(set), level);
    auto [it, fresh] = index.emplace(key, static_cast<int>(states.size()));
    if (fresh) {
      states.push_back(std::move(key));
      check_budget(states.size(), max_states, "NBW");
    }
    return it->second;
  };
  intern({root}, 0);
  const std::size_t letters = alphabet.size();
  for (std::size_t q = 0; q < states.size(); ++q) {
    const auto [set, level] = states[q];
    for (std::size_t li = 0; li < letters; ++li) {
      std::vector<Choice> choices{Choice{}};
      for (int f : set) choices = product(choices, expand(expand, f, li));
      prune(choices);
      std::vector<int> succ;
      for (const auto& c : choices) {
        std::size_t j = level == k ? 0 : level;
        while (j < k && !std::binary_search(c.deferred.begin(), c.deferred.end(), untils[j])) ++j;
        succ.push_back(intern(c.next, j));
      }
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
      nbw.delta.push_back(std::move(succ));
    }
  }
  nbw.num_states = states.size();
  nbw.initial = 0;
  nbw.accepting.resize(states.size());
  for (std::size_t q = 0; q < states.size(); ++q) nbw.accepting[q] = states[q].second == k;
  return nbw;
}

NBW ltl_to_nbw(const Formula& phi) { return ltl_to_nbw(phi, Alphabet::of_formula(phi)); }

// ---------------------------------------------------------------- Safra

namespace {

using Bits = std::vector<std::uint64_t>;

bool any(const Bits& b) {
  return std::any_of(b.begin(), b.end(), [](std::uint64_t w) { return w != 0; });
}

struct SafraNode {
  int name;
  Bits label;
  bool marked;
  std::vector<SafraNode> children;  // oldest first
};

struct SafraTree {
  bool empty = true;
  SafraNode root;
};

void encode(const SafraNode& n, std::vector<std::uint64_t>& out) {
  out.push_back(static_cast<std::uint64_t>(n.name) << 33 | static_cast<std::uint64_t>(n.marked) << 32 |
                n.children.size());
  out.insert(out.end(), n.label.begin(), n.label.end());
  for (const auto& c : n.children) encode(c, out);
}

struct VecHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto x : v) h = (h ^ x) * 0x100000001b3ULL ^ (h >> 31);
    return static_cast<std::size_t>(h);
  }
};

class Safra {
 public:
  explicit Safra(const NBW& nbw) : nbw_(nbw), words_((nbw.num_states + 63) / 64) {
    accepting_.assign(words_, 0);
    for (std::size_t q = 0; q < nbw.num_states; ++q) {
      if (nbw.accepting[q]) accepting_[q / 64] |= std::uint64_t{1} << (q % 64);
    }
  }

  SafraTree initial() const {
    SafraTree t;
    t.empty = false;
    t.root = {0, Bits(words_, 0), false, {}};
    t.root.label[nbw_.initial / 64] |= std::uint64_t{1} << (nbw_.initial % 64);
    return t;
  }

  SafraTree step(const SafraTree& in, std::size_t letter) const {
    if (in.empty) return in;
    SafraTree t = in;
    std::vector<char> used(2 * nbw_.num_states + 1, 0);
    collect_names(t.root, used);
    unmark_and_branch(t.root, used);
    advance(t.root, letter);
    Bits blocked(words_, 0);
    horizontal(t.root, blocked);
    if (!any(t.root.label)) return SafraTree{};
    drop_empty(t.root);
    vertical(t.root);
    return t;
  }

 private:
  void collect_names(const SafraNode& n, std::vector<char>& used) const {
    used[n.name] = 1;
    for (const auto& c : n.children) collect_names(c, used);
  }

  void unmark_and_branch(SafraNode& n, std::vector<char>& used) const {
    n.marked = false;
    for (auto& c : n.children) unmark_and_branch(c, used);
    Bits fin(words_);
    for (std::size_t i = 0; i < words_; ++i) fin[i] = n.label[i] & accepting_[i];
    if (any(fin)) {
      int name = 0;
      while (used[name]) ++name;
      used[name] = 1;
      n.children.push_back({name, std::move(fin), false, {}});
    }
  }

  void advance(SafraNode& n, std::size_t letter) const {
    Bits out(words_, 0);
    for (std::size_t q = 0; q < nbw_.num_states; ++q) {
      if (!(n.label[q / 64] >> (q % 64) & 1)) continue;
      for (int r : nbw_.next(static_cast<int>(q), letter)) out[r / 64] |= std::uint64_t{1} << (r % 64);
    }
    n.label = std::move(out);
    for (auto& c : n.children) advance(c, letter);
  }

  void horizontal(SafraNode& n, const Bits& blocked) const {
    for (std::size_t i = 0; i < words_; ++i) n.label[i] &= ~blocked[i];
    Bits older = blocked;
    for (auto& c : n.children) {
      horizontal(c, older);
      for (std::size_t i = 0; i < words_; ++i) older[i] |= c.label[i];
    }
  }

  void drop_empty(SafraNode& n) const {
    std::erase_if(n.children, [](const SafraNode& c) { return !any(c.label); });
    for (auto& c : n.children) drop_empty(c);
  }

  void vertical(SafraNode& n) const {
    if (!n.children.empty()) {
      Bits u(words_, 0);
      for (const auto& c : n.children) {
        for (std::size_t i = 0; i < words_; ++i) u[i] |= c.label[i];
      }
      if (u == n.label) {
        n.children.clear();
        n.marked = true;
        return;
      }
    }
    for (auto& c : n.children) vertical(c);
  }

  const NBW& nbw_;
  std::size_t words_;
  Bits accepting_;
};

void names_of(const SafraNode& n, std::vector<int>& present, std::vector<int>& marked) {
  present.push_back(n.name);
  if (n.marked) marked.push_back(n.name);
  for (const auto& c : n.children) names_of(c, present, marked);
}

}  // namespace

DRW nbw_to_drw_safra(const NBW& nbw, std::size_t max_states) {
  if (nbw.num_states == 0) throw ValidationError("Safra's construction needs a nonempty automaton");
  Safra safra(nbw);
  const std::size_t k = nbw.alphabet.size();
  std::unordered_map<std::vector<std::uint64_t>, int, VecHash> index;
  std::vector<SafraTree> trees;
  auto intern = [&](SafraTree t) {
    std::vector<std::uint64_t> key;
    if (!t.empty) encode(t.root, key);
    auto [it, fresh] = index.emplace(std::move(key), static_cast<int>(trees.size()));
    if (fresh) {
      trees.push_back(std::move(t));
      check_budget(trees.size(), max_states, "Safra automaton");
    }
    return it->second;
  };
  DRW drw;
  drw.alphabet = nbw.alphabet;
  intern(safra.initial());
  for (std::size_t q = 0; q < trees.size(); ++q) {
    for (std::size_t l = 0; l < k; ++l) {
      SafraTree next = safra.step(trees[q], l);
      drw.delta.push_back(intern(std::move(next)));
    }
  }
  drw.num_states = trees.size();
  drw.initial = 0;

  const std::size_t pool = 2 * nbw.num_states + 1;
  std::vector<std::vector<int>> marked_in(pool), absent_in(pool);
  for (std::size_t q = 0; q < trees.size(); ++q) {
    std::vector<char> present(pool, 0);
    if (!trees[q].empty) {
      std::vector<int> names, marked;
      names_of(trees[q].root, names, marked);
      for (int n : names) present[n] = 1;
      for (int n : marked) marked_in[n].push_back(static_cast<int>(q));
    }
    for (std::size_t n = 0; n < pool; ++n) {
      if (!present[n]) absent_in[n].push_back(static_cast<int>(q));
    }
  }
  for (std::size_t n = 0; n < pool; ++n) {
    if (!marked_in[n].empty()) drw.pairs.push_back({marked_in[n], absent_in[n]});
  }
  return drw;
}

// ---------------------------------------------------------------- union, unfair, runs

DRW drw_union(const DRW& a, const DRW& b) {
  if (!(a.alphabet == b.alphabet)) throw ValidationError("DRW union over different alphabets");
  const std::size_t k = a.alphabet.size();
  const std::size_t n2 = b.num_states;
  DRW u;
  u.alphabet = a.alphabet;
  u.num_states = a.num_states * n2;
  u.initial = static_cast<int>(a.initial * n2 + b.initial);
  u.delta.resize(u.num_states * k);
  for (std::size_t p = 0; p < a.num_states; ++p) {
    for (std::size_t q = 0; q < n2; ++q) {
      for (std::size_t l = 0; l < k; ++l) {
        u.delta[(p * n2 + q) * k + l] =
            static_cast<int>(a.next(static_cast<int>(p), l) * n2 + b.next(static_cast<int>(q), l));
      }
    }
  }
  auto lift_right = [&](const std::vector<int>& set) {
    std::vector<int> out;
    for (std::size_t p = 0; p < a.num_states; ++p) {
      for (int q : set) out.push_back(static_cast<int>(p * n2 + q));
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  auto lift_left = [&](const std::vector<int>& set) {
    std::vector<int> out;
    for (int p : set) {
      for (std::size_t q = 0; q < n2; ++q) out.push_back(static_cast<int>(p * n2 + q));
    }
    return out;
  };
  for (const auto& p : b.pairs) u.pairs.push_back({lift_right(p.inf), lift_right(p.finite)});
  for (const auto& p : a.pairs) u.pairs.push_back({lift_left(p.inf), lift_left(p.finite)});
  return u;
}

DRW unfair_drw(const Domain& domain) {
  const Alphabet alphabet = Alphabet::of_domain(domain);
  const std::size_t k = alphabet.size();
  std::vector<std::pair<StateId, ActionId>> decoded(k);
  for (std::size_t l = 0; l < k; ++l) decoded[l] = domain.decode(alphabet[l]);

  // State 0: nothing read yet; state 1: rejecting sink; others: (previous letter or -1, current letter).
  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> states{{-2, -2}, {-2, -2}};
  auto intern = [&](int prev, int cur) {
    auto [it, fresh] = index.emplace(std::make_pair(prev, cur), static_cast<int>(states.size()));
    if (fresh) states.push_back({prev, cur});
    return it->second;
  };
  DRW drw;
  drw.alphabet = alphabet;
  drw.initial = 0;
  for (std::size_t q = 0; q < states.size(); ++q) {
    for (std::size_t l = 0; l < k; ++l) {
      const auto [s, a] = decoded[l];
      int target = 1;
      if (q == 0) {
        if (s == domain.initial()) target = intern(-1, static_cast<int>(l));
      } else if (q > 1) {
        const auto [ps, pa] = decoded[states[q].second];
        if (domain.has_transition(ps, pa, s)) target = intern(states[q].second, static_cast<int>(l));
      }
      drw.delta.push_back(target);
    }
  }
  drw.num_states = states.size();
  for (const auto& t : domain.transitions()) {
    RabinPair p;
    for (std::size_t q = 2; q < states.size(); ++q) {
      const auto [prev, cur] = states[q];
      if (decoded[cur] == std::make_pair(t.from, t.action)) p.inf.push_back(static_cast<int>(q));
      if (prev >= 0 && decoded[prev] == std::make_pair(t.from, t.action) && decoded[cur].first == t.to) {
        p.finite.push_back(static_cast<int>(q));
      }
    }
    drw.pairs.push_back(std::move(p));
  }
  return drw;
}

bool drw_run_lasso(const DRW& drw, const Lasso& word) {
  int q = drw.initial;
  for (Letter l : word.prefix) q = drw.next(q, drw.alphabet.index(l));
  std::vector<std::size_t> loop(word.loop.size());
  for (std::size_t i = 0; i < loop.size(); ++i) loop[i] = drw.alphabet.index(word.loop[i]);
  std::map<int, std::size_t> pass_of;
  std::vector<std::vector<int>> visited;
  while (!pass_of.count(q)) {
    pass_of.emplace(q, visited.size());
    std::vector<int> seen;
    for (std::size_t l : loop) {
      q = drw.next(q, l);
      seen.push_back(q);
    }
    visited.push_back(std::move(seen));
  }
  std::vector<int> recurring;
  for (std::size_t p = pass_of[q]; p < visited.size(); ++p) {
    recurring.insert(recurring.end(), visited[p].begin(), visited[p].end());
  }
  std::sort(recurring.begin(), recurring.end());
  recurring.erase(std::unique(recurring.begin(), recurring.end()), recurring.end());
  return drw.rabin_accepts(recurring);
}

DRW goal_to_drw(const Formula& phi, Dialect dialect, const Alphabet& alphabet, std::size_t max_states) {
  if (dialect == Dialect::Ltlf) return dfw_to_drw(ltlf_to_dfw(phi, alphabet, max_states));
  return nbw_to_drw_safra(ltl_to_nbw(phi, alphabet, max_states), max_states);
}

DRW goal_to_drw(const Formula& phi, Dialect dialect, const Domain& domain, std::size_t max_states) {
  if (dialect == Dialect::Ltlf) return dfw_to_drw(ltlf_to_dfw_on(phi, domain, max_states));
  return goal_to_drw(phi, dialect, Alphabet::of_domain(domain), max_states);
}

// ---------------------------------------------------------------- dumps

namespace {

nlohmann::json header(const char* type, const Alphabet& alphabet, std::size_t states, int initial) {
  nlohmann::json j;
  j["format"] = kAutomatonFormat;
  j["type"] = type;
  j["alphabet"] = nlohmann::json::array();
  for (Letter l : alphabet.letters()) j["alphabet"].push_back(alphabet.vocabulary().props(l));
  j["states"] = states;
  j["initial"] = initial;
  return j;
}

}  // namespace

nlohmann::json to_json(const DFW& dfw) {
  auto j = header("dfw", dfw.alphabet, dfw.num_states, dfw.initial);
  auto& tr = j["transitions"] = nlohmann::json::array();
  for (std::size_t q = 0; q < dfw.num_states; ++q) {
    for (std::size_t l = 0; l < dfw.alphabet.size(); ++l) tr.push_back({q, l, dfw.next(static_cast<int>(q), l)});
  }
  auto& acc = j["accepting"] = nlohmann::json::array();
  for (std::size_t q = 0; q < dfw.num_states; ++q) {
    if (dfw.accepting[q]) acc.push_back(q);
  }
  return j;
}

nlohmann::json to_json(const NBW& nbw) {
  auto j = header("nbw", nbw.alphabet, nbw.num_states, nbw.initial);
  auto& tr = j["transitions"] = nlohmann::json::array();
  for (std::size_t q = 0; q < nbw.num_states; ++q) {
    for (std::size_t l = 0; l < nbw.alphabet.size(); ++l) {
      for (int r : nbw.next(static_cast<int>(q), l)) tr.push_back({q, l, r});
    }
  }
  auto& acc = j["accepting"] = nlohmann::json::array();
  for (std::size_t q = 0; q < nbw.num_states; ++q) {
    if (nbw.accepting[q]) acc.push_back(q);
  }
  return j;
}

nlohmann::json to_json(const DRW& drw) {
  auto j = header("drw", drw.alphabet, drw.num_states, drw.initial);
  auto& tr = j["transitions"] = nlohmann::json::array();
  for (std::size_t q = 0; q < drw.num_states; ++q) {
    for (std::size_t l = 0; l < drw.alphabet.size(); ++l) tr.push_back({q, l, drw.next(static_cast<int>(q), l)});
  }
  auto& pairs = j["pairs"] = nlohmann::json::array();
  for (const auto& p : drw.pairs) pairs.push_back({p.inf, p.finite});
  return j;
}

}  // namespace fairplan
