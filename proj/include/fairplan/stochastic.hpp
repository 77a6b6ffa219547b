#pragma once

#include <optional>
#include <vector>

#include "fairplan/automata.hpp"
#include "fairplan/domain.hpp"
#include "fairplan/game.hpp"

namespace fairplan {

/// Maximal end components of the game read as an MDP (environment vertices
/// are random), restricted to `within`. Each component is a sorted vertex list.
std::vector<std::vector<int>> maximal_end_components(const RabinGame& game, const std::vector<char>& within);

/// Almost-sure Rabin analysis on supports: the agent region from which some
/// pair is satisfied with probability one, with a memoryless strategy.
WinningCertificate almost_sure_rabin(const RabinGame& game);

struct PlanOutcome {
  bool sat = false;
  std::optional<PolicyMachine> policy;
  std::size_t game_vertices = 0;
};

PlanOutcome almost_sure_solve(const Domain& domain, const Formula& goal, Dialect dialect,
                              std::size_t max_states = kDefaultMaxStates);

/// Classic strong-cyclic fixpoint for reaching a Boolean combination of fluents.
PlanOutcome strong_cyclic_reachability(const Domain& domain, const Formula& target);

/// Checks the Markov chain induced by the policy: every reachable bottom
/// component must satisfy some pair of the goal automaton. Returns a lasso
/// running through a violating component, if any.
std::optional<Lasso> almost_sure_audit(const Domain& domain, const PolicyMachine& policy, const DRW& goal);

}  // namespace fairplan
