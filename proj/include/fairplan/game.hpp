#pragma once

#include <cstddef>
#include <vector>

#include "fairplan/automata.hpp"
#include "fairplan/domain.hpp"

namespace fairplan {

enum class Player { Agent, Environment };

/// Two-player arena with a Rabin condition for the agent. Vertices are
/// numbered jointly; in products, agent vertices are (d, q) and environment
/// vertices are (d, q, a).
struct RabinGame {
  std::vector<char> agent;              // owner per vertex
  std::vector<std::vector<int>> succ;   // sorted successor lists
  int initial = 0;
  std::vector<RabinPair> pairs;         // over vertices

  // Product labels (-1 outside products).
  std::vector<StateId> domain_state;
  std::vector<int> automaton_state;
  std::vector<ActionId> action;         // committed action at environment vertices

  std::size_t size() const { return succ.size(); }
  std::size_t num_agent() const;
  /// Largest automaton state id plus one.
  std::size_t memory_size() const;
  /// Throws InvariantError when a vertex has no successor or a pair is out of range.
  void validate() const;
};

/// Synchronous product, restricted to vertices reachable from (s0, q0).
RabinGame product(const Domain& domain, const DRW& automaton);
/// Product with the union of two automata, built on the fly; the pairs are
/// those drw_union(a, b) would produce, restricted to reachable states.
RabinGame product(const Domain& domain, const DRW& a, const DRW& b);

struct WinningCertificate {
  Player winner = Player::Environment;
  std::vector<int> strategy;   // chosen successor per agent vertex in the region, else -1
  std::vector<char> region;    // agent winning region
};

/// Recursive pair elimination with attractors.
WinningCertificate solve_rabin(const RabinGame& game);

inline constexpr std::size_t kBruteForceMaxChoices = 12;
/// Enumerates memoryless agent strategies; refuses games with more than 12
/// agent vertices that have a real choice.
WinningCertificate brute_force_rabin(const RabinGame& game);

/// Every cycle reachable from `from` in the graph restricted by the strategy
/// satisfies some pair.
bool strategy_is_winning(const RabinGame& game, const std::vector<int>& strategy, int from);

/// Memory = automaton states of the product; output = certificate choice.
PolicyMachine extract_policy(const RabinGame& game, const WinningCertificate& cert, const Domain& domain);

}  // namespace fairplan
