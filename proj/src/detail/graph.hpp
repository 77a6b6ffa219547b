#pragma once

#include <algorithm>
#include <utility>
#include <vector>

namespace fairplan::detail {

using Adjacency = std::vector<std::vector<int>>;

/// Tarjan's algorithm, iterative. Nodes with alive[v] == 0 are ignored.
/// Returns a component id per node (-1 for ignored nodes) and the count.
inline std::pair<std::vector<int>, int> scc(const Adjacency& succ, const std::vector<char>& alive) {
  const int n = static_cast<int>(succ.size());
  std::vector<int> comp(n, -1), low(n, 0), order(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  std::vector<std::pair<int, std::size_t>> call;
  int counter = 0, ncomp = 0;
  for (int root = 0; root < n; ++root) {
    if (!alive[root] || order[root] >= 0) continue;
    call.push_back({root, 0});
    order[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i < succ[v].size()) {
        const int w = succ[v][i++];
        if (!alive[w]) continue;
        if (order[w] < 0) {
          order[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order[w]);
        }
        continue;
      }
      const int done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == order[done]) {
        while (true) {
          const int w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = ncomp;
          if (w == done) break;
        }
        ++ncomp;
      }
    }
  }
  return {comp, ncomp};
}

inline std::pair<std::vector<int>, int> scc(const Adjacency& succ) {
  return scc(succ, std::vector<char>(succ.size(), 1));
}

/// True when the component of v contains a cycle (more than one node or a self-loop).
inline bool nontrivial(const Adjacency& succ, const std::vector<int>& comp, int v) {
  for (int w : succ[v]) {
    if (w == v) return true;
  }
  for (std::size_t u = 0; u < comp.size(); ++u) {
    if (static_cast<int>(u) != v && comp[u] == comp[v]) return true;
  }
  return false;
}

/// Nodes reachable from the sources.
inline std::vector<char> reachable(const Adjacency& succ, const std::vector<int>& sources) {
  std::vector<char> seen(succ.size(), 0);
  std::vector<int> work;
  for (int s : sources) {
    if (!seen[s]) {
      seen[s] = 1;
      work.push_back(s);
    }
  }
  while (!work.empty()) {
    const int v = work.back();
    work.pop_back();
    for (int w : succ[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        work.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace fairplan::detail
