#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fairplan/domain.hpp"
#include "fairplan/formula.hpp"

namespace fairplan {

struct AtmTransition {
  std::string from;
  std::string read;
  std::string to;
  std::string write;
  char move = 'N';  // L, R or N
};

/// Alternating machine. `existential` and `universal` list the non-halting
/// states; `accept` and `reject` halt.
struct AlternatingTM {
  std::vector<std::string> existential;
  std::vector<std::string> universal;
  std::string accept;
  std::string reject;
  std::string initial;
  std::vector<std::string> alphabet;
  std::string blank;
  std::vector<AtmTransition> transitions;

  /// All states: existential, universal, accept, reject.
  std::vector<std::string> states() const;
  bool is_existential(const std::string& q) const;
  bool is_universal(const std::string& q) const;
  /// Throws ValidationError on malformed machines, on modes that do not
  /// alternate, and on universal states stuck on some tape letter.
  void validate() const;
};

inline constexpr const char* kAtmFormat = "fairplan-atm/1";
inline constexpr int kHardMaxN = 4;
inline constexpr std::size_t kHardMaxStates = 8;

AlternatingTM atm_from_json(const nlohmann::json& document);
nlohmann::json atm_to_json(const AlternatingTM& machine);
AlternatingTM load_atm_file(const std::string& path);

/// Letter fluents of the generated domain, in vocabulary order.
inline const std::vector<std::string> kHardLetters = {"b0", "b1", "pct", "dol", "hash", "hash1", "hash2", "bot"};

/// Domain of the string family C0 (# T #' C #'' K)* # bot*; depends on n only.
Domain gen_domain(int n);

/// Bits per encoded symbol or transition.
int symbol_width(const AlternatingTM& machine);

/// phi1 joined k times: phi2 holds one step after the k-th occurrence of phi1.
Formula join(const Formula& phi1, const Formula& phi2, int k);

/// At the start of a block: the next block's number equals the challenge
/// number found after `hops` occurrences of hash2.
Formula challenge_here(int n, int hops);

struct HardGoal {
  Formula conf = Formula::tt();
  Formula tran_odd = Formula::tt();
  Formula tran_even = Formula::tt();
  Formula num = Formula::tt();
  Formula acc = Formula::tt();
  Formula chal1 = Formula::tt();
  Formula chal2 = Formula::tt();
  Formula env = Formula::tt();
  Formula agent = Formula::tt();
  Formula goal = Formula::tt();
};

HardGoal gen_goal_parts(const AlternatingTM& machine, const std::string& input, int n);
Formula gen_goal(const AlternatingTM& machine, const std::string& input, int n);

struct HardInstance {
  Domain domain;
  Formula goal;
  Dialect dialect = Dialect::Ltlf;
  int n = 1;
  int m = 1;
};

HardInstance gen_instance(const AlternatingTM& machine, const std::string& input, int n);

}  // namespace fairplan
