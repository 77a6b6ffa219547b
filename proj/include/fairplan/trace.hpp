#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fairplan {

/// A letter is a set of propositions, stored as a bitmask over a Vocabulary.
using Letter = std::uint64_t;

inline constexpr std::size_t kMaxPropositions = 64;

/// Ordered list of proposition names; bit i of a Letter is names()[i].
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> names);

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }
  std::optional<std::size_t> index(std::string_view name) const;

  /// Letter with exactly the named propositions set. Throws on unknown names.
  Letter letter(const std::vector<std::string>& props) const;
  /// Sorted proposition names present in a letter.
  std::vector<std::string> props(Letter letter) const;
  std::string format(Letter letter) const;

  bool operator==(const Vocabulary&) const = default;

 private:
  std::vector<std::string> names_;
};

struct FiniteTrace {
  std::vector<Letter> letters;
  std::size_t last() const { return letters.size() - 1; }
};

/// The infinite word prefix . loop^omega. The loop is never empty.
struct Lasso {
  std::vector<Letter> prefix;
  std::vector<Letter> loop;

  std::size_t length() const { return prefix.size() + loop.size(); }
  /// Letter at an arbitrary position of the infinite word.
  Letter at(std::size_t position) const;
  /// Successor index within the folded representation 0..length()-1.
  std::size_t next(std::size_t position) const {
    return position + 1 < length() ? position + 1 : prefix.size();
  }
  /// Same word with the shortest prefix and loop (rotation/unrolling normal form).
  Lasso normalized() const;
  bool same_word(const Lasso& other) const;
};

}  // namespace fairplan
