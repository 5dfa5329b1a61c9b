#pragma once

#include <vector>

#include "planexec/knowledge.hpp"
#include "planexec/model.hpp"

namespace planexec::planner {

/// A durative action with every variable substituted by an object.
struct GroundedAction {
    pddl::ActionName name;
    std::vector<pddl::ObjectName> args;
    pddl::NumericExpr duration;  // ground constant or fluent term
    pddl::Condition cond_start, cond_overall, cond_end;
    pddl::Effect eff_start, eff_end;

    bool operator==(const GroundedAction&) const = default;
};

/// Substitutes `args` into the action schema named `name`. Throws
/// ValidationError on unknown action, arity or type mismatch. Objects are
/// looked up among the state's instances and the domain constants.
GroundedAction ground_action(const pddl::Domain& domain, const kb::KnowledgeState& state,
                             const pddl::ActionName& name,
                             const std::vector<pddl::ObjectName>& args);

/// Enumerates every type-compatible grounding of every action schema over the
/// state's instances, in deterministic (action, args) order.
std::vector<GroundedAction> ground_all(const pddl::Domain& domain, const kb::KnowledgeState& state);

/// `(name arg1 arg2 ...)` — the canonical text form used for tie-breaking
/// and messages.
std::string grounded_signature(const GroundedAction& a);
std::string grounded_signature(const pddl::ActionName& name,
                               const std::vector<pddl::ObjectName>& args);

}  // namespace planexec::planner
