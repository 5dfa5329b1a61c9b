#pragma once

#include <optional>
#include <string>

#include "planexec/grounding.hpp"
#include "planexec/plan.hpp"

namespace planexec::planner {

struct PlanViolation {
    double time = 0.0;
    int item_index = -1;  // -1 for goal/global violations
    std::string detail;
};

struct ValidationReport {
    std::optional<PlanViolation> violation;  // empty = plan ok
    kb::KnowledgeState final_state;          // state after the full timeline

    bool ok() const { return !violation.has_value(); }
};

/// Simulates the plan timeline against full durative semantics. At each
/// instant, end conditions are checked and end effects applied (per item, in
/// plan order) before start conditions are checked and start effects applied;
/// over-all conditions must hold at every event point within [t, t+duration).
/// The final state must satisfy the goal. Reports the first violation.
ValidationReport validate_plan(const pddl::Domain& domain, const kb::KnowledgeState& init,
                               const Plan& plan);

}  // namespace planexec::planner
