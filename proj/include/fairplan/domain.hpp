#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairplan/trace.hpp"

namespace fairplan {

using StateId = int;
using ActionId = int;

struct Transition {
  StateId from;
  ActionId action;
  StateId to;
  bool operator==(const Transition&) const = default;
  auto operator<=>(const Transition&) const = default;
};

struct DomainOptions {
  /// Add a dummy action leading to a dummy sink state for states that
  /// would otherwise have no applicable action.
  bool auto_sink = false;
  /// Drop states and transitions unreachable from the initial state.
  bool reachable_only = false;
};

/// Explicit FOND domain. States are sets of fluents and actions are sets of
/// action variables, both stored as Letters over one shared vocabulary
/// (fluents first, then action variables).
class Domain {
 public:
  using Options = DomainOptions;

  Domain(std::vector<std::string> fluents, std::vector<std::string> action_vars,
         std::vector<Letter> states, std::vector<Letter> actions, StateId initial,
         std::vector<Transition> transitions, Options options = {});

  const Vocabulary& vocabulary() const { return vocab_; }
  const std::vector<std::string>& fluents() const { return fluents_; }
  const std::vector<std::string>& action_vars() const { return action_vars_; }
  Letter fluent_mask() const { return fluent_mask_; }

  std::size_t num_states() const { return states_.size(); }
  std::size_t num_actions() const { return actions_.size(); }
  Letter state(StateId s) const { return states_[s]; }
  Letter action(ActionId a) const { return actions_[a]; }
  StateId initial() const { return initial_; }

  const std::vector<Transition>& transitions() const { return transitions_; }
  /// Tr(s, a), sorted.
  const std::vector<StateId>& successors(StateId s, ActionId a) const {
    return succ_[static_cast<std::size_t>(s) * actions_.size() + a];
  }
  /// Actions applicable in s, ascending.
  const std::vector<ActionId>& applicable(StateId s) const { return applicable_[s]; }
  bool has_transition(StateId s, ActionId a, StateId t) const;

  /// The trace letter s u a.
  Letter letter(StateId s, ActionId a) const { return states_[s] | actions_[a]; }
  /// Every letter s u a with a applicable in s, sorted and unique.
  std::vector<Letter> realizable_letters() const;

  int find_state(Letter fluents) const;
  int find_action(Letter vars) const;
  /// Decode a trace letter into (state, action), or {-1, -1} if off-domain.
  std::pair<StateId, ActionId> decode(Letter letter) const;

  std::string describe_state(StateId s) const { return vocab_.format(states_[s]); }

 private:
  void index();

  std::vector<std::string> fluents_;
  std::vector<std::string> action_vars_;
  Vocabulary vocab_;
  Letter fluent_mask_ = 0;
  std::vector<Letter> states_;
  std::vector<Letter> actions_;
  StateId initial_ = 0;
  std::vector<Transition> transitions_;
  std::vector<std::vector<StateId>> succ_;
  std::vector<std::vector<ActionId>> applicable_;
};

/// Parse and validate the versioned domain document.
Domain load_domain(const nlohmann::json& document, Domain::Options options = {});
Domain load_domain_file(const std::string& path, Domain::Options options = {});
/// Canonical document: proposition lists sorted, entries in id order.
nlohmann::json domain_to_json(const Domain& domain);

inline constexpr const char* kDomainFormat = "fairplan-domain/1";
inline constexpr const char* kPolicyFormat = "fairplan-policy/1";
inline constexpr const char* kLassoFormat = "fairplan-lasso/1";

/// Lasso over domain letters, anchored at the initial state and consistent
/// with the transition relation, including the edge that closes the loop.
bool is_domain_lasso(const Lasso& word, const Domain& domain);

/// Every (s,a) occurring in the loop realizes each of its outcomes in the loop.
/// Throws ValidationError if the word is not a trace of the domain.
bool is_state_action_fair(const Lasso& word, const Domain& domain);

/// Finite-state Mealy policy: reading domain state s in memory m it outputs
/// output(m, s) and moves to update(m, s). Entries may be undefined (-1)
/// on (m, s) pairs that the policy never reaches.
class PolicyMachine {
 public:
  PolicyMachine(std::size_t memory_size, std::size_t num_states, int initial_memory = 0);

  std::size_t memory_size() const { return memory_size_; }
  std::size_t num_states() const { return num_states_; }
  int initial_memory() const { return initial_; }

  void set(int memory, StateId s, ActionId action, int next_memory);
  ActionId output(int memory, StateId s) const { return out_[slot(memory, s)]; }
  int update(int memory, StateId s) const { return upd_[slot(memory, s)]; }
  bool defined(int memory, StateId s) const { return out_[slot(memory, s)] >= 0; }

 private:
  std::size_t slot(int memory, StateId s) const {
    return static_cast<std::size_t>(memory) * num_states_ + static_cast<std::size_t>(s);
  }
  std::size_t memory_size_;
  std::size_t num_states_;
  int initial_;
  std::vector<ActionId> out_;
  std::vector<int> upd_;
};

/// Checks every defined entry against the domain and that every (memory,
/// state) reachable from the initial configuration is defined.
void validate_policy(const PolicyMachine& policy, const Domain& domain);

nlohmann::json policy_to_json(const PolicyMachine& policy, const Domain& domain);
PolicyMachine policy_from_json(const nlohmann::json& document, const Domain& domain);

/// Environment behaviour for run_policy: given the current
/// state, the chosen action and the selector's own state, pick a successor
/// and the next selector state.
struct SuccessorSelector {
  std::function<std::pair<StateId, int>(StateId state, ActionId action, int selector_state)> choose;
  int initial_state = 0;
};

/// Run the policy until a (domain state, memory, selector state) triple
/// repeats and return the resulting lasso.
Lasso run_policy(const Domain& domain, const PolicyMachine& policy,
                 const SuccessorSelector& selector);

nlohmann::json lasso_to_json(const Lasso& word, const Vocabulary& vocab);
Lasso lasso_from_json(const nlohmann::json& document, const Vocabulary& vocab);

}  // namespace fairplan
