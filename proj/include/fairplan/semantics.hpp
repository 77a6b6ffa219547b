#pragma once

#include "fairplan/formula.hpp"
#include "fairplan/trace.hpp"

namespace fairplan {

/// tau, 0 |= phi under finite-trace semantics (X is strong: no successor at
/// the last position). Atoms missing from the vocabulary are false.
bool eval_ltlf_finite(const FiniteTrace& trace, const Formula& phi,
                      const Vocabulary& vocab);

/// Exact satisfaction of prefix.loop^omega. With Dialect::Ltlf the word
/// satisfies phi iff some nonempty finite prefix does.
bool eval_ltl_lasso(const Lasso& word, const Formula& phi,
                    const Vocabulary& vocab, Dialect dialect);

}  // namespace fairplan
