#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "fairplan/formula.hpp"
#include "fairplan/trace.hpp"

namespace fairplan::detail {

/// Hash-consed negation normal form. Atoms are resolved against a
/// vocabulary; atoms outside it are constant false.
class NnfDag {
 public:
  enum class Kind : std::uint8_t { True, False, Lit, NLit, And, Or, Next, WeakNext, Until, Release };
  struct Node {
    Kind kind;
    int prop = -1;
    int lhs = -1, rhs = -1;
    std::vector<int> args;  // And / Or
  };

  NnfDag(const Vocabulary& vocab, Dialect dialect) : vocab_(vocab), dialect_(dialect) {
    tt_ = intern({Kind::True, -1, -1, -1, {}});
    ff_ = intern({Kind::False, -1, -1, -1, {}});
  }

  int tt() const { return tt_; }
  int ff() const { return ff_; }
  const Node& node(int id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

  int build(const Formula& f) { return convert(f, false); }

  bool holds(int lit, Letter letter) const {
    const Node& n = nodes_[lit];
    const bool present = letter >> n.prop & 1;
    return n.kind == Kind::Lit ? present : !present;
  }

  int mk_and(std::vector<int> args) { return junction(Kind::And, std::move(args)); }
  int mk_or(std::vector<int> args) { return junction(Kind::Or, std::move(args)); }

 private:
  struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const {
      std::uint64_t h = 1469598103934665603ULL;
      for (int x : v) h = (h ^ static_cast<std::uint32_t>(x)) * 1099511628211ULL;
      return static_cast<std::size_t>(h);
    }
  };

  int intern(Node n) {
    std::vector<int> key{static_cast<int>(n.kind), n.prop, n.lhs, n.rhs};
    key.insert(key.end(), n.args.begin(), n.args.end());
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(n));
    index_.emplace(std::move(key), id);
    return id;
  }

  int junction(Kind kind, std::vector<int> args) {
    const int unit = kind == Kind::And ? tt_ : ff_;
    const int zero = kind == Kind::And ? ff_ : tt_;
    std::vector<int> flat;
    for (int a : args) {
      if (a == unit) continue;
      if (a == zero) return zero;
      if (nodes_[a].kind == kind) {
        flat.insert(flat.end(), nodes_[a].args.begin(), nodes_[a].args.end());
      } else {
        flat.push_back(a);
      }
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    // p together with !p
    for (std::size_t i = 0; i < flat.size(); ++i) {
      const Node& n = nodes_[flat[i]];
      if (n.kind != Kind::Lit) continue;
      for (int b : flat) {
        if (nodes_[b].kind == Kind::NLit && nodes_[b].prop == n.prop) return zero;
      }
    }
    if (flat.empty()) return unit;
    if (flat.size() == 1) return flat.front();
    return intern({kind, -1, -1, -1, std::move(flat)});
  }

  int literal(const std::string& name, bool negated) {
    auto p = vocab_.index(name);
    if (!p) return negated ? tt_ : ff_;
    return intern({negated ? Kind::NLit : Kind::Lit, static_cast<int>(*p), -1, -1, {}});
  }

  int unary(Kind kind, int a) { return intern({kind, -1, a, -1, {}}); }
  int binary(Kind kind, int a, int b) { return intern({kind, -1, a, b, {}}); }

  int convert(const Formula& f, bool neg) {
    const auto key = std::make_pair(f.id(), neg);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    using Op = Formula::Op;
    int r = -1;
    switch (f.op()) {
      case Op::True: r = neg ? ff_ : tt_; break;
      case Op::False: r = neg ? tt_ : ff_; break;
      case Op::Atom: r = literal(f.name(), neg); break;
      case Op::Not: r = convert(f.lhs(), !neg); break;
      case Op::And:
        r = neg ? mk_or({convert(f.lhs(), true), convert(f.rhs(), true)})
                : mk_and({convert(f.lhs(), false), convert(f.rhs(), false)});
        break;
      case Op::Or:
        r = neg ? mk_and({convert(f.lhs(), true), convert(f.rhs(), true)})
                : mk_or({convert(f.lhs(), false), convert(f.rhs(), false)});
        break;
      case Op::Implies:
        r = neg ? mk_and({convert(f.lhs(), false), convert(f.rhs(), true)})
                : mk_or({convert(f.lhs(), true), convert(f.rhs(), false)});
        break;
      case Op::Next: {
        const int a = convert(f.lhs(), neg);
        // Over finite traces the dual of the strong next is the weak next.
        r = unary(neg && dialect_ == Dialect::Ltlf ? Kind::WeakNext : Kind::Next, a);
        break;
      }
      case Op::Until:
        r = neg ? binary(Kind::Release, convert(f.lhs(), true), convert(f.rhs(), true))
                : binary(Kind::Until, convert(f.lhs(), false), convert(f.rhs(), false));
        break;
      case Op::Release:
        r = neg ? binary(Kind::Until, convert(f.lhs(), true), convert(f.rhs(), true))
                : binary(Kind::Release, convert(f.lhs(), false), convert(f.rhs(), false));
        break;
      case Op::Eventually:
        r = neg ? binary(Kind::Release, ff_, convert(f.lhs(), true))
                : binary(Kind::Until, tt_, convert(f.lhs(), false));
        break;
      case Op::Always:
        r = neg ? binary(Kind::Until, tt_, convert(f.lhs(), true))
                : binary(Kind::Release, ff_, convert(f.lhs(), false));
        break;
    }
    memo_.emplace(key, r);
    return r;
  }

  struct PairHash {
    std::size_t operator()(const std::pair<const void*, bool>& p) const {
      return std::hash<const void*>()(p.first) * 2 + p.second;
    }
  };

  const Vocabulary& vocab_;
  Dialect dialect_;
  int tt_ = -1, ff_ = -1;
  std::vector<Node> nodes_;
  std::unordered_map<std::vector<int>, int, VecHash> index_;
  std::unordered_map<std::pair<const void*, bool>, int, PairHash> memo_;
};

}  // namespace fairplan::detail
