#pragma once

// Brute-force establisher oracle shared by the unit and acceptance suites.
// Deliberately structured differently from graph::build_graph: it replays the
// timeline chronologically and reads off the last producer of every atom at
// each requirement checkpoint, instead of scanning producer candidates per
// requirement.

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "planexec/plan_graph.hpp"

namespace planexec::testing {

inline std::set<graph::Edge> establisher_oracle(const planner::Plan& plan,
                                                const pddl::Domain& domain,
                                                const kb::KnowledgeState& init) {
    using graph::Edge;
    using graph::EdgeReason;
    using pddl::GroundAtom;

    struct Stamp {
        int node = -1;
    };
    std::vector<planner::GroundedAction> grounded;
    for (const auto& item : plan.items)
        grounded.push_back(planner::ground_action(domain, init, item.action, item.args));

    struct Ev {
        double t;
        int phase;  // 0 = end, 1 = start
        int idx;
    };
    std::vector<Ev> events;
    for (int i = 0; i < static_cast<int>(plan.items.size()); ++i) {
        events.push_back({plan.items[i].time, 1, i});
        events.push_back({planner::snap_time(plan.items[i].time + plan.items[i].duration), 0, i});
    }
    std::stable_sort(events.begin(), events.end(), [](const Ev& a, const Ev& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.phase < b.phase;
    });

    std::map<GroundAtom, Stamp> last_add, last_del;
    std::set<Edge> edges;
    auto record = [&](int consumer, const pddl::Condition& c) {
        for (const auto& l : c.literals) {
            const GroundAtom atom = pddl::to_ground(l.atom);
            const auto& table = l.negated ? last_del : last_add;
            auto it = table.find(atom);
            if (it != table.end() && it->second.node != consumer)
                edges.insert({it->second.node, consumer, EdgeReason::Establishes, atom, l.negated});
        }
    };

    size_t i = 0;
    while (i < events.size()) {
        const double t = events[i].t;
        std::vector<int> enders, starters;
        while (i < events.size() && events[i].t == t) {
            (events[i].phase == 0 ? enders : starters).push_back(events[i].idx);
            ++i;
        }
        for (int idx : enders) record(idx, grounded[idx].cond_end);
        for (int idx : enders) {
            for (const auto& d : grounded[idx].eff_end.dels) last_del[pddl::to_ground(d)] = {idx};
            for (const auto& a : grounded[idx].eff_end.adds) last_add[pddl::to_ground(a)] = {idx};
        }
        for (int idx : starters) {
            record(idx, grounded[idx].cond_start);
            record(idx, grounded[idx].cond_overall);
        }
        for (int idx : starters) {
            for (const auto& d : grounded[idx].eff_start.dels)
                last_del[pddl::to_ground(d)] = {idx};
            for (const auto& a : grounded[idx].eff_start.adds)
                last_add[pddl::to_ground(a)] = {idx};
        }
    }
    return edges;
}

inline std::set<graph::Edge> establisher_edges(const graph::PlanGraph& g) {
    std::set<graph::Edge> out;
    for (const auto& e : g.edges)
        if (e.reason == graph::EdgeReason::Establishes) out.insert(e);
    return out;
}

}  // namespace planexec::testing
