#include "planexec/validate.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>

#include "planexec/errors.hpp"
#include "planexec/printer.hpp"

namespace planexec::planner {
namespace {

// Reports which literal/comparison failed, for violation messages.
std::string unsatisfied_part(const pddl::Condition& c, const kb::KnowledgeState& s) {
    for (const auto& l : c.literals) {
        const bool present = s.has_atom(pddl::to_ground(l.atom));
        if (present == l.negated)
            return (l.negated ? "(not " + pddl::print_atom(l.atom) + ")"
                              : pddl::print_atom(l.atom));
    }
    for (const auto& cmp : c.comparisons) {
        pddl::Condition single;
        single.comparisons.push_back(cmp);
        if (!kb::evaluate(single, s))
            return pddl::print_condition(single);
    }
    return "(condition)";
}

}  // namespace

ValidationReport validate_plan(const pddl::Domain& domain, const kb::KnowledgeState& init,
                               const Plan& plan) {
    ValidationReport report;
    kb::KnowledgeState state = init;

    struct Timed {
        double t;
        int phase;  // 0 = end, 1 = start
        int index;
    };
    std::vector<Timed> events;
    std::vector<GroundedAction> grounded;
    grounded.reserve(plan.items.size());
    try {
        for (int i = 0; i < static_cast<int>(plan.items.size()); ++i) {
            const auto& item = plan.items[i];
            grounded.push_back(ground_action(domain, init, item.action, item.args));
            events.push_back({item.time, 1, i});
            events.push_back({snap_time(item.time + item.duration), 0, i});
        }
    } catch (const ValidationError& e) {
        report.violation = PlanViolation{0.0, -1, e.what()};
        report.final_state = state;
        return report;
    }
    std::stable_sort(events.begin(), events.end(), [](const Timed& a, const Timed& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.phase < b.phase;  // ends before starts at the same instant
    });

    auto fail = [&](double t, int index, std::string detail) {
        report.violation = PlanViolation{t, index, std::move(detail)};
        report.final_state = state;
        return report;
    };

    std::set<int> running;  // indices whose over-all window contains the current point
    size_t i = 0;
    while (i < events.size()) {
        const double t = events[i].t;
        // Phase 1: end conditions checked against the pre-instant state, then
        // end effects applied in plan order.
        size_t j = i;
        std::vector<int> enders, starters;
        while (j < events.size() && events[j].t == t) {
            (events[j].phase == 0 ? enders : starters).push_back(events[j].index);
            ++j;
        }
        for (int idx : enders) {
            try {
                if (!kb::evaluate(grounded[idx].cond_end, state))
                    return fail(t, idx,
                                fmt::format("at-end condition {} of {} does not hold",
                                            unsatisfied_part(grounded[idx].cond_end, state),
                                            grounded_signature(grounded[idx])));
            } catch (const EvaluationError& e) {
                return fail(t, idx, e.what());
            }
        }
        for (int idx : enders) {
            running.erase(idx);
            try {
                state = kb::apply(grounded[idx].eff_end, std::move(state));
            } catch (const EvaluationError& e) {
                return fail(t, idx, e.what());
            }
        }
        // Phase 2: start conditions (all see the post-end state), then start
        // effects in plan order.
        for (int idx : starters) {
            try {
                if (!kb::evaluate(grounded[idx].cond_start, state))
                    return fail(t, idx,
                                fmt::format("at-start condition {} of {} does not hold",
                                            unsatisfied_part(grounded[idx].cond_start, state),
                                            grounded_signature(grounded[idx])));
            } catch (const EvaluationError& e) {
                return fail(t, idx, e.what());
            }
        }
        for (int idx : starters) {
            try {
                state = kb::apply(grounded[idx].eff_start, std::move(state));
            } catch (const EvaluationError& e) {
                return fail(t, idx, e.what());
            }
            running.insert(idx);
        }
        // Phase 3: over-all invariants at this event point for every action
        // whose window [start, end) contains it.
        for (int idx : running) {
            try {
                if (!kb::evaluate(grounded[idx].cond_overall, state))
                    return fail(t, idx,
                                fmt::format("over-all condition {} of {} does not hold",
                                            unsatisfied_part(grounded[idx].cond_overall, state),
                                            grounded_signature(grounded[idx])));
            } catch (const EvaluationError& e) {
                return fail(t, idx, e.what());
            }
        }
        i = j;
    }

    try {
        if (!kb::evaluate(state.goal, state))
            return fail(events.empty() ? 0.0 : events.back().t, -1,
                        "goal " + unsatisfied_part(state.goal, state) +
                            " not satisfied in the final state");
    } catch (const EvaluationError& e) {
        return fail(events.empty() ? 0.0 : events.back().t, -1, e.what());
    }
    report.final_state = std::move(state);
    return report;
}

}  // namespace planexec::planner
