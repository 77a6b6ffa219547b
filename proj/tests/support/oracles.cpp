#include "support/oracles.hpp"

#include <set>

namespace fairplan::testing {

std::string fixture(const std::string& name) { return std::string(FAIRPLAN_FIXTURES) + "/" + name; }

Domain d1() { return load_domain_file(fixture("d1.json")); }

Lasso tau1(const Domain& d) {
  const auto& v = d.vocabulary();
  return Lasso{{}, {v.letter({"l", "a"}), v.letter({"m", "a"}), v.letter({"r", "a"}), v.letter({"m", "a"})}};
}

void for_each_domain_lasso(const Domain& d, std::size_t max_prefix, std::size_t max_loop,
                           const std::function<bool(const Lasso&)>& visit) {
  // Enumerate paths (s0,a0)(s1,a1)... of length up to max_prefix + max_loop, then
  // every split into prefix and loop whose closing edge is a transition.
  std::vector<std::pair<StateId, ActionId>> path;
  bool stop = false;
  auto emit = [&] {
    const std::size_t n = path.size();
    for (std::size_t p = 0; p < n && p <= max_prefix && !stop; ++p) {
      if (n - p > max_loop) continue;
      const auto [ls, la] = path.back();
      if (!d.has_transition(ls, la, path[p].first)) continue;
      Lasso w;
      for (std::size_t i = 0; i < p; ++i) w.prefix.push_back(d.letter(path[i].first, path[i].second));
      for (std::size_t i = p; i < n; ++i) w.loop.push_back(d.letter(path[i].first, path[i].second));
      if (!visit(w)) stop = true;
    }
  };
  auto rec = [&](auto&& self, StateId s) -> void {
    for (ActionId a : d.applicable(s)) {
      if (stop) return;
      path.push_back({s, a});
      emit();
      if (path.size() < max_prefix + max_loop) {
        for (StateId t : d.successors(s, a)) self(self, t);
      }
      path.pop_back();
    }
  };
  rec(rec, d.initial());
}

void for_each_lasso(const std::vector<Letter>& letters, std::size_t max_prefix, std::size_t max_loop,
                    const std::function<bool(const Lasso&)>& visit) {
  std::vector<Letter> word;
  bool stop = false;
  auto rec = [&](auto&& self) -> void {
    if (stop) return;
    const std::size_t n = word.size();
    for (std::size_t p = 0; p < n && p <= max_prefix && !stop; ++p) {
      if (n - p > max_loop) continue;
      Lasso w{{word.begin(), word.begin() + p}, {word.begin() + p, word.end()}};
      if (!visit(w)) stop = true;
    }
    if (n == max_prefix + max_loop) return;
    for (Letter l : letters) {
      word.push_back(l);
      self(self);
      word.pop_back();
    }
  };
  rec(rec);
}

bool fair_by_definition(const Domain& d, const Lasso& w) {
  // Unroll the loop twice so that the closing step appears as an ordinary step.
  std::vector<Letter> seq = w.loop;
  seq.insert(seq.end(), w.loop.begin(), w.loop.end());
  std::set<std::pair<StateId, ActionId>> recurring;
  std::set<Transition> steps;
  for (std::size_t i = 0; i < w.loop.size(); ++i) {
    const auto [s, a] = d.decode(seq[i]);
    const auto [t, b] = d.decode(seq[i + 1]);
    (void)b;
    recurring.insert({s, a});
    steps.insert({s, a, t});
  }
  for (const auto& tr : d.transitions()) {
    if (recurring.count({tr.from, tr.action}) && !steps.count(tr)) return false;
  }
  return true;
}

}  // namespace fairplan::testing

namespace fairplan::testing {

namespace {

bool atom_holds(Letter l, const std::string& name, const Vocabulary& v) {
  const auto i = v.index(name);
  return i && (l >> *i & 1);
}

}  // namespace

bool naive_finite(const FiniteTrace& t, std::size_t i, const Formula& f, const Vocabulary& v) {
  using Op = Formula::Op;
  const std::size_t last = t.last();
  switch (f.op()) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return atom_holds(t.letters[i], f.name(), v);
    case Op::Not: return !naive_finite(t, i, f.lhs(), v);
    case Op::And: return naive_finite(t, i, f.lhs(), v) && naive_finite(t, i, f.rhs(), v);
    case Op::Or: return naive_finite(t, i, f.lhs(), v) || naive_finite(t, i, f.rhs(), v);
    case Op::Implies: return !naive_finite(t, i, f.lhs(), v) || naive_finite(t, i, f.rhs(), v);
    case Op::Next: return i + 1 <= last && naive_finite(t, i + 1, f.lhs(), v);
    case Op::Until:
      for (std::size_t k = i; k <= last; ++k) {
        if (naive_finite(t, k, f.rhs(), v)) return true;
        if (!naive_finite(t, k, f.lhs(), v)) return false;
      }
      return false;
    case Op::Release:
      return !naive_finite(t, i, Formula::until(Formula::lnot(f.lhs()), Formula::lnot(f.rhs())), v);
    case Op::Eventually:
      for (std::size_t k = i; k <= last; ++k) {
        if (naive_finite(t, k, f.lhs(), v)) return true;
      }
      return false;
    case Op::Always:
      for (std::size_t k = i; k <= last; ++k) {
        if (!naive_finite(t, k, f.lhs(), v)) return false;
      }
      return true;
  }
  return false;
}

bool naive_lasso(const Lasso& w, std::size_t i, const Formula& f, const Vocabulary& v) {
  using Op = Formula::Op;
  // Positions past this horizon repeat an earlier suffix.
  const std::size_t horizon = std::max(i, w.prefix.size()) + w.loop.size();
  switch (f.op()) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return atom_holds(w.at(i), f.name(), v);
    case Op::Not: return !naive_lasso(w, i, f.lhs(), v);
    case Op::And: return naive_lasso(w, i, f.lhs(), v) && naive_lasso(w, i, f.rhs(), v);
    case Op::Or: return naive_lasso(w, i, f.lhs(), v) || naive_lasso(w, i, f.rhs(), v);
    case Op::Implies: return !naive_lasso(w, i, f.lhs(), v) || naive_lasso(w, i, f.rhs(), v);
    case Op::Next: return naive_lasso(w, i + 1, f.lhs(), v);
    case Op::Until:
      for (std::size_t k = i; k < horizon; ++k) {
        if (naive_lasso(w, k, f.rhs(), v)) return true;
        if (!naive_lasso(w, k, f.lhs(), v)) return false;
      }
      return false;
    case Op::Release:
      return !naive_lasso(w, i, Formula::until(Formula::lnot(f.lhs()), Formula::lnot(f.rhs())), v);
    case Op::Eventually:
      for (std::size_t k = i; k < horizon; ++k) {
        if (naive_lasso(w, k, f.lhs(), v)) return true;
      }
      return false;
    case Op::Always:
      for (std::size_t k = i; k < horizon; ++k) {
        if (!naive_lasso(w, k, f.lhs(), v)) return false;
      }
      return true;
  }
  return false;
}

bool naive_prefix(const Lasso& w, const Formula& f, const Vocabulary& v, std::size_t horizon) {
  FiniteTrace t;
  for (std::size_t n = 0; n < horizon; ++n) {
    t.letters.push_back(w.at(n));
    if (naive_finite(t, 0, f, v)) return true;
  }
  return false;
}

}  // namespace fairplan::testing
