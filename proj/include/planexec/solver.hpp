#pragma once

#include <optional>

#include "planexec/knowledge.hpp"
#include "planexec/plan.hpp"
#include "planexec/validate.hpp"

namespace planexec::planner {

/// Solves for the state's goal. Returns the plan, or std::nullopt when the
/// search space is exhausted without reaching the goal (no-plan, a non-error
/// outcome). A satisfied goal yields an empty plan. Throws SolverError on
/// solver failures (budget exhausted, external solver problems, numeric
/// conditions with the builtin solver).
std::optional<Plan> solve(const pddl::Domain& domain, const kb::KnowledgeState& state,
                          const SolverSpec& solver = SolverSpec::builtin());

namespace detail {
/// Search node budget for the builtin solver.
inline constexpr int kNodeBudget = 200000;
/// Separation between a finished action and its successor's start.
inline constexpr double kEpsilon = 0.001;
}  // namespace detail

}  // namespace planexec::planner
