#pragma once

#include <climits>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

namespace fairplan::detail {

/// Minimal reduced ordered BDD manager; variable 0 is the top of the order.
class BddManager {
 public:
  using Ref = int;
  static constexpr Ref kFalse = 0;
  static constexpr Ref kTrue = 1;

  BddManager() {
    nodes_.push_back({kTerminalVar, 0, 0});
    nodes_.push_back({kTerminalVar, 1, 1});
  }

  Ref var(int v) { return make(v, kFalse, kTrue); }

  Ref ite(Ref f, Ref g, Ref h) {
    if (f == kTrue) return g;
    if (f == kFalse) return h;
    if (g == h) return g;
    if (g == kTrue && h == kFalse) return f;
    const Key key{f, g, h};
    if (auto it = ite_cache_.find(key); it != ite_cache_.end()) return it->second;
    const int v = std::min({top(f), top(g), top(h)});
    const Ref hi = ite(cofactor(f, v, true), cofactor(g, v, true), cofactor(h, v, true));
    const Ref lo = ite(cofactor(f, v, false), cofactor(g, v, false), cofactor(h, v, false));
    const Ref r = make(v, lo, hi);
    ite_cache_.emplace(key, r);
    return r;
  }

  Ref land(Ref a, Ref b) { return ite(a, b, kFalse); }
  Ref lor(Ref a, Ref b) { return ite(a, kTrue, b); }

  /// Simultaneous substitution of every variable v by sub(v).
  Ref compose(Ref f, const std::function<Ref(int)>& sub) {
    std::unordered_map<Ref, Ref> memo;
    auto rec = [&](auto&& self, Ref n) -> Ref {
      if (n <= kTrue) return n;
      if (auto it = memo.find(n); it != memo.end()) return it->second;
      const Node nd = nodes_[n];
      const Ref r = ite(sub(nd.var), self(self, nd.hi), self(self, nd.lo));
      memo.emplace(n, r);
      return r;
    };
    return rec(rec, f);
  }

  bool eval(Ref f, const std::function<bool(int)>& value) const {
    while (f > kTrue) f = value(nodes_[f].var) ? nodes_[f].hi : nodes_[f].lo;
    return f == kTrue;
  }

  std::size_t node_count() const { return nodes_.size(); }

 private:
  static constexpr int kTerminalVar = INT_MAX;
  struct Node {
    int var;
    Ref lo, hi;
  };
  struct Key {
    int a, b, c;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = static_cast<std::uint32_t>(k.a);
      h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(k.b);
      h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(k.c);
      return static_cast<std::size_t>(h ^ (h >> 29));
    }
  };

  int top(Ref f) const { return nodes_[f].var; }
  Ref cofactor(Ref f, int v, bool positive) const {
    if (nodes_[f].var != v) return f;
    return positive ? nodes_[f].hi : nodes_[f].lo;
  }
  Ref make(int v, Ref lo, Ref hi) {
    if (lo == hi) return lo;
    const Key key{v, lo, hi};
    if (auto it = unique_.find(key); it != unique_.end()) return it->second;
    const Ref r = static_cast<Ref>(nodes_.size());
    nodes_.push_back({v, lo, hi});
    unique_.emplace(key, r);
    return r;
  }

  std::vector<Node> nodes_;
  std::unordered_map<Key, Ref, KeyHash> unique_;
  std::unordered_map<Key, Ref, KeyHash> ite_cache_;
};

}  // namespace fairplan::detail
