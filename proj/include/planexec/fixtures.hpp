#pragma once

#include <string>
#include <vector>

namespace planexec::fixtures {

/// Multi-robot kitchen domain: move / transport / cook / recharge.
/// Ingredients sit at fixed corner zones (never consumed at the source);
/// transport readies them at the cooking zone; cook consumes readiness and
/// prepares the dish. Robots low on battery can only move, and recharge at
/// the recharge zone. Every action drains the battery fluent a little.
const std::string& cooking_domain_pddl();

/// Cooking problem text for 1..3 robots (r2d2, c3po, bb8), empty goal.
std::string cooking_problem_pddl(int robots);

/// Car-assembly domain grounding the three-robot demo plan below:
/// move / transport / assemble over pieces at dedicated zones.
const std::string& assembly_domain_pddl();

/// Problem whose initial state makes the demo plan valid (robots and pieces
/// in place, goal: three assembled cars).
const std::string& assembly_problem_pddl();

/// The 21-line three-robot assembly plan, tab dialect, no durations.
const std::string& assembly_plan_text();

inline constexpr int kAssemblyPlanLines = 21;

const std::vector<std::string>& cooking_dishes();   // cake, spaghetti, omelet
const std::vector<std::string>& cooking_robots();   // r2d2, c3po, bb8 (in config order)

}  // namespace planexec::fixtures
