#pragma once

#include <string_view>

#include "planexec/model.hpp"

namespace planexec::pddl {

/// Parses a PDDL 2.1-subset domain. Supported requirements: :strips,
/// :typing, :durative-actions, :fluents, :negative-preconditions.
/// Throws ParseError with line/column on lexical or semantic errors.
Domain parse_domain(std::string_view text);

/// Parses a problem file and validates every object, atom, fluent and the
/// goal against the domain.
Problem parse_problem(std::string_view text, const Domain& domain);

/// Fragment parsers, used by the operator shell. The condition/atom text is
/// one parenthesized PDDL expression, e.g. "(and (robot_at rb1 kitchen))".
Condition parse_condition_text(std::string_view text);
GroundAtom parse_ground_atom_text(std::string_view text);
/// "(= (battery_level rb1) 100)" -> fluent + value; "(battery_level rb1)"
/// is accepted when `value_required` is false (value reported as 0).
std::pair<GroundFluent, double> parse_ground_fluent_text(std::string_view text,
                                                         bool value_required = true);

}  // namespace planexec::pddl
