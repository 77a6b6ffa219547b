#include "fairplan/semantics.hpp"

#include <optional>
#include <set>
#include <string>
#include <unordered_map>

namespace fairplan {

namespace {

using Op = Formula::Op;

/// Subformulas in post-order, children always before parents.
struct Closure {
  std::vector<Formula> subs;
  std::vector<int> lhs, rhs;
  std::vector<int> prop;  // vocabulary bit for atoms, -1 if unknown

  Closure(const Formula& phi, const Vocabulary& vocab) {
    std::unordered_map<const void*, int> index;
    auto rec = [&](auto&& self, const Formula& f) -> int {
      if (auto it = index.find(f.id()); it != index.end()) return it->second;
      int l = -1, r = -1;
      if (f.arity() >= 1) l = self(self, f.lhs());
      if (f.arity() == 2) r = self(self, f.rhs());
      const int id = static_cast<int>(subs.size());
      subs.push_back(f);
      lhs.push_back(l);
      rhs.push_back(r);
      int p = -1;
      if (f.op() == Op::Atom) {
        if (auto i = vocab.index(f.name())) p = static_cast<int>(*i);
      }
      prop.push_back(p);
      index.emplace(f.id(), id);
      return id;
    };
    rec(rec, phi);
  }

  std::size_t size() const { return subs.size(); }
  int root() const { return static_cast<int>(subs.size()) - 1; }

  bool holds(int i, Letter letter) const { return prop[i] >= 0 && (letter >> prop[i] & 1); }

  /// Values of every subformula at a position reading `letter`, given the
  /// values at the next position, or no next position when `next` is null.
  std::vector<char> step(Letter letter, const std::vector<char>* next) const {
    std::vector<char> v(size());
    for (std::size_t k = 0; k < size(); ++k) {
      const int a = lhs[k], b = rhs[k];
      const bool has_next = next != nullptr;
      switch (subs[k].op()) {
        case Op::True: v[k] = 1; break;
        case Op::False: v[k] = 0; break;
        case Op::Atom: v[k] = holds(static_cast<int>(k), letter); break;
        case Op::Not: v[k] = !v[a]; break;
        case Op::And: v[k] = v[a] && v[b]; break;
        case Op::Or: v[k] = v[a] || v[b]; break;
        case Op::Implies: v[k] = !v[a] || v[b]; break;
        case Op::Next: v[k] = has_next && (*next)[a]; break;
        case Op::Until: v[k] = v[b] || (v[a] && has_next && (*next)[k]); break;
        case Op::Release: v[k] = v[b] && (v[a] || !has_next || (*next)[k]); break;
        case Op::Eventually: v[k] = v[a] || (has_next && (*next)[k]); break;
        case Op::Always: v[k] = v[a] && (!has_next || (*next)[k]); break;
      }
    }
    return v;
  }
};

bool eval_ltl_infinite(const Lasso& w, const Closure& cl) {
  const std::size_t n = w.length();
  // val[k][j]: subformula k at folded position j.
  std::vector<std::vector<char>> val(cl.size(), std::vector<char>(n));
  for (std::size_t k = 0; k < cl.size(); ++k) {
    const int a = cl.lhs[k], b = cl.rhs[k];
    auto& out = val[k];
    const Op op = cl.subs[k].op();
    auto pointwise = [&](auto fn) {
      for (std::size_t j = 0; j < n; ++j) out[j] = fn(j);
    };
    // Least (init 0) or greatest (init 1) fixpoint of out[j] = fn(j, out[next j]).
    auto fixpoint = [&](char init, auto fn) {
      std::fill(out.begin(), out.end(), init);
      for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t j = n; j-- > 0;) {
          const char nv = fn(j, out[w.next(j)]);
          if (nv != out[j]) {
            out[j] = nv;
            changed = true;
          }
        }
      }
    };
    switch (op) {
      case Op::True: pointwise([](std::size_t) { return 1; }); break;
      case Op::False: pointwise([](std::size_t) { return 0; }); break;
      case Op::Atom: pointwise([&](std::size_t j) { return cl.holds(static_cast<int>(k), w.at(j)); }); break;
      case Op::Not: pointwise([&](std::size_t j) { return !val[a][j]; }); break;
      case Op::And: pointwise([&](std::size_t j) { return val[a][j] && val[b][j]; }); break;
      case Op::Or: pointwise([&](std::size_t j) { return val[a][j] || val[b][j]; }); break;
      case Op::Implies: pointwise([&](std::size_t j) { return !val[a][j] || val[b][j]; }); break;
      case Op::Next: pointwise([&](std::size_t j) { return static_cast<bool>(val[a][w.next(j)]); }); break;
      case Op::Until:
        fixpoint(0, [&](std::size_t j, char nx) { return val[b][j] || (val[a][j] && nx); });
        break;
      case Op::Release:
        fixpoint(1, [&](std::size_t j, char nx) { return val[b][j] && (val[a][j] || nx); });
        break;
      case Op::Eventually:
        fixpoint(0, [&](std::size_t j, char nx) { return val[a][j] || nx; });
        break;
      case Op::Always:
        fixpoint(1, [&](std::size_t j, char nx) { return val[a][j] && nx; });
        break;
    }
  }
  return val[cl.root()][0];
}

/// Some nonempty prefix of the lasso satisfies phi under finite semantics.
///
/// A prefix of length |u| + t|v| + r evaluates to F_u(G^t(F_{v[0,r)}(end))),
/// where F_w is the backward evaluation through the letters of w and G = F_v.
/// For each r the sequence G^t(.) is eventually periodic, so it suffices to
/// iterate until a valuation vector repeats.
bool eval_ltlf_prefixes(const Lasso& w, const Closure& cl) {
  const int root = cl.root();
  auto through = [&](const std::vector<Letter>& word, std::size_t len,
                     std::optional<std::vector<char>> at_end) {
    for (std::size_t i = len; i-- > 0;) {
      at_end = cl.step(word[i], at_end ? &*at_end : nullptr);
    }
    return at_end;
  };
  const auto& u = w.prefix;
  const auto& v = w.loop;
  for (std::size_t len = 1; len < u.size(); ++len) {
    if ((*through(u, len, std::nullopt))[root]) return true;
  }
  for (std::size_t r = 0; r < v.size(); ++r) {
    std::optional<std::vector<char>> z = through(v, r, std::nullopt);
    std::set<std::vector<char>> seen;
    bool first = true;
    while (true) {
      if (!(first && r == 0 && u.empty())) {
        auto at0 = through(u, u.size(), z);
        if (at0 && (*at0)[root]) return true;
      }
      if (z) {
        if (!seen.insert(*z).second) break;
      }
      z = through(v, v.size(), z);
      first = false;
    }
  }
  return false;
}

}  // namespace

bool eval_ltlf_finite(const FiniteTrace& trace, const Formula& phi, const Vocabulary& vocab) {
  if (trace.letters.empty()) return false;
  const Closure cl(phi, vocab);
  std::optional<std::vector<char>> vals;
  for (std::size_t j = trace.letters.size(); j-- > 0;) {
    vals = cl.step(trace.letters[j], vals ? &*vals : nullptr);
  }
  return (*vals)[cl.root()];
}

bool eval_ltl_lasso(const Lasso& word, const Formula& phi, const Vocabulary& vocab,
                    Dialect dialect) {
  const Closure cl(phi, vocab);
  return dialect == Dialect::Ltl ? eval_ltl_infinite(word, cl) : eval_ltlf_prefixes(word, cl);
}

}  // namespace fairplan
