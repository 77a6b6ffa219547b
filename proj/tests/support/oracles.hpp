#pragma once

#include <functional>
#include <string>

#include "fairplan/domain.hpp"
#include "fairplan/formula.hpp"
#include "fairplan/trace.hpp"

namespace fairplan::testing {

/// D1: l -> m, m -> l, m -> r, r -> m, single action a.
Domain d1();
/// The trace ({l,a}{m,a}{r,a}{m,a})^omega of d1.
Lasso tau1(const Domain& d);
std::string fixture(const std::string& name);

/// Every lasso of the domain with |prefix| <= max_prefix and 1 <= |loop| <= max_loop,
/// starting at the initial state. The callback may return false to stop early.
void for_each_domain_lasso(const Domain& d, std::size_t max_prefix, std::size_t max_loop,
                           const std::function<bool(const Lasso&)>& visit);

/// Every lasso over `letters` with the given size bounds.
void for_each_lasso(const std::vector<Letter>& letters, std::size_t max_prefix, std::size_t max_loop,
                    const std::function<bool(const Lasso&)>& visit);

/// Direct reading of the fairness definition on the unrolled word: (s,a)
/// recurring implies each outcome recurs.
bool fair_by_definition(const Domain& d, const Lasso& w);

}  // namespace fairplan::testing

namespace fairplan::testing {

/// Textbook recursive evaluation at a position of a finite trace.
bool naive_finite(const FiniteTrace& t, std::size_t i, const Formula& f, const Vocabulary& v);
/// Textbook recursive evaluation at a position of an infinite lasso word;
/// quantifiers over future positions range over one prefix-plus-loop horizon.
bool naive_lasso(const Lasso& w, std::size_t i, const Formula& f, const Vocabulary& v);
/// Some nonempty prefix of the lasso satisfies f, by enumerating prefixes
/// up to the given length.
bool naive_prefix(const Lasso& w, const Formula& f, const Vocabulary& v, std::size_t horizon);

}  // namespace fairplan::testing
