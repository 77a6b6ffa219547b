#pragma once

#include <optional>
#include <string_view>

#include "fairplan/automata.hpp"
#include "fairplan/domain.hpp"
#include "fairplan/game.hpp"
#include "fairplan/stochastic.hpp"

namespace fairplan {

enum class Fairness { None, Stochastic, StateAction };
enum class Mode { Sound, NaiveProduct };

std::string_view to_string(Fairness fairness);
Fairness parse_fairness(std::string_view text);
std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

struct PlanRequest {
  Fairness fairness = Fairness::StateAction;
  Mode mode = Mode::Sound;
  Dialect dialect = Dialect::Ltl;
  std::size_t max_states = kDefaultMaxStates;
};

struct PlanResult {
  bool sat = false;
  /// Policy over the input domain; absent for UNSAT and for the naive
  /// product, whose policy lives on the product domain.
  std::optional<PolicyMachine> policy;
  bool diagnostic = false;
  std::size_t automaton_states = 0;
  std::size_t automaton_pairs = 0;
  std::size_t game_vertices = 0;
};

/// Decide the planning problem <D, goal> under the requested fairness.
PlanResult plan(const Domain& domain, const Formula& goal, const PlanRequest& request);

/// The domain D x A: states (s, q) with q encoded in fresh fluents `_q<i>`,
/// same actions, (s,q) -a-> (s', delta(q, s u a)). Reachable part only.
/// `automaton_state` receives q for every product state.
Domain product_domain(const Domain& domain, const DRW& automaton, std::vector<int>* automaton_state = nullptr);

struct VerifyReport {
  bool pass = true;
  std::optional<Lasso> witness;
  std::size_t lassos_checked = 0;
};

/// Bounded-exhaustive audit: every lasso generated by the policy with
/// |prefix|, |loop| <= bound (as configurations) whose trace is admitted by
/// the fairness mode satisfies the goal. Stochastic fairness runs the
/// Markov-chain audit instead and ignores the bound.
VerifyReport verify(const Domain& domain, const PolicyMachine& policy, const Formula& goal, Dialect dialect,
                    Fairness fairness, std::size_t bound = 8, std::size_t max_states = kDefaultMaxStates);

}  // namespace fairplan
