#pragma once

#include "fairplan/domain.hpp"
#include "fairplan/formula.hpp"

namespace fairplan {

/// Complete conjunction of fluent literals identifying state s.
Formula state_literal(const Domain& domain, StateId s);
/// Complete conjunction of action-variable literals identifying action a.
Formula action_literal(const Domain& domain, ActionId a);

/// The LTL formula holding exactly on the state-action fair traces of the
/// domain: one conjunct  G F (s & a) -> G F (s & a & X s')  per transition,
/// or true when the domain has no transitions.
Formula emit_fairness_formula(const Domain& domain);

}  // namespace fairplan
