#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "fairplan/domain.hpp"
#include "fairplan/formula.hpp"
#include "fairplan/trace.hpp"

namespace fairplan {

inline constexpr std::size_t kDefaultMaxStates = 1'000'000;
inline constexpr std::size_t kMaxAlphabetLetters = std::size_t{1} << 20;

/// Explicit list of letters over a vocabulary, sorted ascending.
class Alphabet {
 public:
  Alphabet() = default;
  Alphabet(Vocabulary vocab, std::vector<Letter> letters);

  /// All subsets of the vocabulary; refuses more than 2^20 letters.
  static Alphabet powerset(Vocabulary vocab);
  /// Powerset over the formula's atoms in sorted order.
  static Alphabet of_formula(const Formula& phi);
  /// Letters s u a realizable in the domain.
  static Alphabet of_domain(const Domain& domain);

  const Vocabulary& vocabulary() const { return vocab_; }
  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  /// Index of a letter, or -1.
  int find(Letter letter) const;
  /// Index of a letter; throws ValidationError if absent.
  std::size_t index(Letter letter) const;

  bool operator==(const Alphabet&) const = default;

 private:
  Vocabulary vocab_;
  std::vector<Letter> letters_;
};

/// Deterministic finite word automaton with a total transition function.
struct DFW {
  Alphabet alphabet;
  std::size_t num_states = 0;
  int initial = 0;
  std::vector<int> delta;  // [state * |alphabet| + letter]
  std::vector<char> accepting;

  int next(int q, std::size_t letter) const { return delta[static_cast<std::size_t>(q) * alphabet.size() + letter]; }
  /// Run on a nonempty finite trace.
  bool accepts(const FiniteTrace& trace) const;
};

/// Nondeterministic Buchi word automaton.
struct NBW {
  Alphabet alphabet;
  std::size_t num_states = 0;
  int initial = 0;
  std::vector<std::vector<int>> delta;  // [state * |alphabet| + letter] -> successors
  std::vector<char> accepting;

  const std::vector<int>& next(int q, std::size_t letter) const {
    return delta[static_cast<std::size_t>(q) * alphabet.size() + letter];
  }
  /// Exact acceptance of a lasso (product with the lasso shape, then a
  /// search for a reachable accepting cycle).
  bool accepts(const Lasso& word) const;
};

/// Sorted state sets.
struct RabinPair {
  std::vector<int> inf;     // I: some member must recur
  std::vector<int> finite;  // F: no member may recur
  bool operator==(const RabinPair&) const = default;
};

/// Deterministic Rabin word automaton.
struct DRW {
  Alphabet alphabet;
  std::size_t num_states = 0;
  int initial = 0;
  std::vector<int> delta;  // [state * |alphabet| + letter]
  std::vector<RabinPair> pairs;

  std::size_t size() const { return num_states; }
  std::size_t index() const { return pairs.size(); }
  int next(int q, std::size_t letter) const { return delta[static_cast<std::size_t>(q) * alphabet.size() + letter]; }
  /// Does a set of recurring states satisfy some pair?
  bool rabin_accepts(const std::vector<int>& recurring) const;
};

DFW ltlf_to_dfw(const Formula& phi, const Alphabet& alphabet,
                std::size_t max_states = kDefaultMaxStates);
DFW ltlf_to_dfw(const Formula& phi);
/// Automaton that is exact on the traces of `domain` only: transitions not
/// taken by any domain trace go to a rejecting trap.
DFW ltlf_to_dfw_on(const Formula& phi, const Domain& domain,
                   std::size_t max_states = kDefaultMaxStates);

/// Infinite words having an accepted nonempty prefix. Edges entering an
/// accepting state are redirected to a fresh absorbing sink; one pair ({sink}, {}).
DRW dfw_to_drw(const DFW& dfw);

NBW ltl_to_nbw(const Formula& phi, const Alphabet& alphabet,
               std::size_t max_states = kDefaultMaxStates);
NBW ltl_to_nbw(const Formula& phi);

/// Safra's construction; one pair per tree-node name that is ever marked.
DRW nbw_to_drw_safra(const NBW& nbw, std::size_t max_states = kDefaultMaxStates);

/// Product automaton accepting L(a) u L(b): size multiplies, index adds.
DRW drw_union(const DRW& a, const DRW& b);

/// Accepts exactly the infinite traces of the domain that are not
/// state-action fair; one pair ({last (s,a)}, {last (s,a,s')}) per transition.
DRW unfair_drw(const Domain& domain);

bool drw_run_lasso(const DRW& drw, const Lasso& word);

/// Full translation route used by the planners: LTLf goes through a DFW,
/// LTL through an NBW and Safra's construction.
DRW goal_to_drw(const Formula& phi, Dialect dialect, const Alphabet& alphabet,
                std::size_t max_states = kDefaultMaxStates);
/// Same, for use in products with `domain`; LTLf goals use ltlf_to_dfw_on.
DRW goal_to_drw(const Formula& phi, Dialect dialect, const Domain& domain,
                std::size_t max_states = kDefaultMaxStates);

inline constexpr const char* kAutomatonFormat = "fairplan-automaton/1";

nlohmann::json to_json(const DFW& dfw);
nlohmann::json to_json(const NBW& nbw);
nlohmann::json to_json(const DRW& drw);

}  // namespace fairplan
