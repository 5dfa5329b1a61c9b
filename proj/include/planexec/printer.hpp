#pragma once

#include <string>

#include "planexec/model.hpp"

namespace planexec::pddl {

/// Emits canonical PDDL that reparses to an equal value. Declaration order
/// is preserved.
std::string print_domain(const Domain& d);

/// Problem printing needs the object/init/goal payload plus names.
std::string print_problem(const Problem& p);

std::string print_condition(const Condition& c);
std::string print_effect_clause(const Effect& e);  // "(and ...)" of the set
std::string print_atom(const Atom& a);
std::string print_ground_atom(const GroundAtom& a);
std::string print_ground_fluent(const GroundFluent& f);
std::string print_numeric_expr(const NumericExpr& e);
std::string print_predicate_def(const PredicateDef& p);
std::string print_function_def(const FunctionDef& f);
std::string print_action(const DurativeAction& a);
std::string format_number(double v);

}  // namespace planexec::pddl
