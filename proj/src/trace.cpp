#include "fairplan/trace.hpp"

#include <algorithm>

#include "fairplan/error.hpp"

namespace fairplan {

Vocabulary::Vocabulary(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > kMaxPropositions) {
    throw CapacityError("vocabulary exceeds " + std::to_string(kMaxPropositions) +
                        " propositions");
  }
  auto sorted = names_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("duplicate proposition in vocabulary");
  }
}

std::optional<std::size_t> Vocabulary::index(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

Letter Vocabulary::letter(const std::vector<std::string>& props) const {
  Letter out = 0;
  for (const auto& p : props) {
    auto i = index(p);
    if (!i) throw ValidationError("unknown proposition '" + p + "'");
    out |= Letter{1} << *i;
  }
  return out;
}

std::vector<std::string> Vocabulary::props(Letter letter) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (letter >> i & 1) out.push_back(names_[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string Vocabulary::format(Letter letter) const {
  std::string out = "{";
  bool first = true;
  for (const auto& p : props(letter)) {
    if (!first) out += ",";
    out += p;
    first = false;
  }
  return out + "}";
}

Letter Lasso::at(std::size_t position) const {
  if (position < prefix.size()) return prefix[position];
  return loop[(position - prefix.size()) % loop.size()];
}

Lasso Lasso::normalized() const {
  Lasso out = *this;
  // Shortest period of the loop.
  const std::size_t n = out.loop.size();
  for (std::size_t p = 1; p <= n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) periodic = out.loop[i] == out.loop[i - p];
    if (periodic) {
      out.loop.resize(p);
      break;
    }
  }
  // Fold prefix letters that repeat the end of the loop.
  while (!out.prefix.empty() && out.prefix.back() == out.loop.back()) {
    std::rotate(out.loop.rbegin(), out.loop.rbegin() + 1, out.loop.rend());
    out.prefix.pop_back();
  }
  return out;
}

bool Lasso::same_word(const Lasso& other) const {
  const Lasso a = normalized();
  const Lasso b = other.normalized();
  return a.prefix == b.prefix && a.loop == b.loop;
}

}  // namespace fairplan
