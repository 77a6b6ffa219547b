#include "fairplan/fairness.hpp"

namespace fairplan {

namespace {

Formula literals(const std::vector<std::string>& names, Letter bits, std::size_t offset) {
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < names.size(); ++i) {
    Formula p = Formula::atom(names[i]);
    parts.push_back((bits >> (offset + i) & 1) ? p : Formula::lnot(p));
  }
  return Formula::conjunction(parts);
}

}  // namespace

Formula state_literal(const Domain& d, StateId s) { return literals(d.fluents(), d.state(s), 0); }

Formula action_literal(const Domain& d, ActionId a) {
  return literals(d.action_vars(), d.action(a), d.fluents().size());
}

Formula emit_fairness_formula(const Domain& d) {
  std::vector<Formula> conjuncts;
  for (const auto& t : d.transitions()) {
    const Formula sa = Formula::land(state_literal(d, t.from), action_literal(d, t.action));
    const Formula sas = Formula::land(sa, Formula::next(state_literal(d, t.to)));
    conjuncts.push_back(Formula::implies(Formula::always(Formula::eventually(sa)),
                                         Formula::always(Formula::eventually(sas))));
  }
  return Formula::conjunction(conjuncts);
}

}  // namespace fairplan
