#include "planexec/plan_graph.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <functional>
#include <map>
#include <tuple>

#include "planexec/errors.hpp"
#include "planexec/printer.hpp"

namespace planexec::graph {
namespace {

using pddl::GroundAtom;

enum class Anchor { Start, End };

struct Stamp {
    int node = -1;
    double time = 0.0;
    Anchor anchor = Anchor::Start;
};

// Effect at `eff` visible to a requirement first needed at `req`?
// End effects land before start-phase checks of the same instant; equal-time
// visibility otherwise doesn't exist (same-timestamp actions stay parallel).
bool visible(double eff_time, Anchor eff_anchor, double req_time, bool req_at_start_phase) {
    if (eff_time < req_time) return true;
    if (eff_time > req_time) return false;
    return eff_anchor == Anchor::End && req_at_start_phase;
}

struct Requirement {
    int node;
    GroundAtom atom;
    bool negated;
    double first_time;       // when the atom is first needed
    bool at_start_phase;     // start/over-all requirements check after end effects
    double window_end;       // last instant the atom is needed (open for over-all)
    bool window_open;        // true: deletion exactly at window_end is safe
};

}  // namespace

std::set<int> PlanGraph::successors(int node) const {
    std::set<int> out;
    for (const auto& e : edges)
        if (e.from == node) out.insert(e.to);
    return out;
}

std::set<int> PlanGraph::producers(int node) const {
    std::set<int> out;
    for (const auto& e : edges)
        if (e.to == node) out.insert(e.from);
    return out;
}

int PlanGraph::in_degree(int node) const { return static_cast<int>(producers(node).size()); }

PlanGraph build_graph(const Plan& plan, const pddl::Domain& domain,
                      const kb::KnowledgeState& init) {
    PlanGraph g;
    for (int i = 0; i < static_cast<int>(plan.items.size()); ++i) {
        const auto& item = plan.items[i];
        PlanNode node;
        node.index = i;
        node.item = item;
        node.action = planner::ground_action(domain, init, item.action, item.args);
        node.t_start = item.time;
        node.t_end = planner::snap_time(item.time + item.duration);
        if (node.t_end <= node.t_start) throw GraphError("non-positive duration in plan");
        g.nodes.push_back(std::move(node));
    }

    // Gather requirements and effect stamps.
    std::vector<Requirement> requirements;
    struct Deletion {
        int node;
        GroundAtom atom;
        double time;
        Anchor anchor;
    };
    std::vector<Deletion> deletions, additions;

    for (const auto& node : g.nodes) {
        auto add_reqs = [&](const pddl::Condition& c, double first, bool start_phase,
                            double wend, bool open) {
            for (const auto& l : c.literals)
                requirements.push_back({node.index, pddl::to_ground(l.atom), l.negated, first,
                                        start_phase, wend, open});
        };
        add_reqs(node.action.cond_start, node.t_start, true, node.t_start, false);
        add_reqs(node.action.cond_overall, node.t_start, true, node.t_end, true);
        add_reqs(node.action.cond_end, node.t_end, false, node.t_end, false);

        for (const auto& a : node.action.eff_start.adds)
            additions.push_back({node.index, pddl::to_ground(a), node.t_start, Anchor::Start});
        for (const auto& a : node.action.eff_end.adds)
            additions.push_back({node.index, pddl::to_ground(a), node.t_end, Anchor::End});
        for (const auto& d : node.action.eff_start.dels)
            deletions.push_back({node.index, pddl::to_ground(d), node.t_start, Anchor::Start});
        for (const auto& d : node.action.eff_end.dels)
            deletions.push_back({node.index, pddl::to_ground(d), node.t_end, Anchor::End});
    }

    // Establisher pass. The producer with the latest visible effect wins;
    // at equal times a start-anchored effect applies after an end-anchored
    // one, and within the same phase the higher plan index applies last.
    auto effect_rank = [](const Deletion& p) {
        return std::make_tuple(p.time, p.anchor == Anchor::Start ? 1 : 0, p.node);
    };
    for (const auto& req : requirements) {
        const auto& producers = req.negated ? deletions : additions;
        const Deletion* best = nullptr;
        for (const auto& p : producers) {
            if (p.node == req.node || p.atom != req.atom) continue;
            if (!visible(p.time, p.anchor, req.first_time, req.at_start_phase)) continue;
            if (!best || effect_rank(p) > effect_rank(*best)) best = &p;
        }
        if (best) {
            g.edges.insert({best->node, req.node, EdgeReason::Establishes, req.atom, req.negated});
        } else {
            const bool in_init = init.atoms.count(req.atom) > 0;
            if (!req.negated && !in_init)
                throw GraphError(fmt::format(
                    "condition atom {} of node {} {} has no establisher and does not hold "
                    "initially",
                    pddl::print_ground_atom(req.atom), req.node,
                    planner::grounded_signature(g.nodes[req.node].action)));
            if (req.negated && in_init)
                throw GraphError(fmt::format(
                    "negative condition (not {}) of node {} {} has no deleter and the atom holds "
                    "initially",
                    pddl::print_ground_atom(req.atom), req.node,
                    planner::grounded_signature(g.nodes[req.node].action)));
        }
    }

    // Ordering pass: deletions against positive requirement windows, additions
    // against negative requirement windows.
    auto order_against = [&](const std::vector<Deletion>& threats, bool threat_deletes) {
        for (const auto& th : threats) {
            for (const auto& req : requirements) {
                if (req.node == th.node || req.atom != th.atom) continue;
                if (req.negated == threat_deletes) continue;  // deletions threaten positive reqs
                // Threats visible before the requirement's first need are the
                // establisher pass's business (a later producer re-establishes).
                if (visible(th.time, th.anchor, req.first_time, req.at_start_phase)) continue;
                // Point requirements: anything not visible at the check lands
                // after it. Over-all windows are checked at every event point
                // inside [start, end), so the threat must land at or past the
                // open end.
                const bool after = req.window_open ? th.time >= req.window_end : true;
                if (!after)
                    throw GraphError(fmt::format(
                        "contradictory timing: node {} {} {} {} at {} inside the requirement "
                        "window of node {}",
                        th.node, planner::grounded_signature(g.nodes[th.node].action),
                        threat_deletes ? "deletes" : "re-adds", pddl::print_ground_atom(th.atom),
                        th.time, req.node));
                const auto& consumer = g.nodes[req.node];
                if (consumer.t_end <= th.time) {
                    g.edges.insert({req.node, th.node, EdgeReason::Orders, th.atom, req.negated});
                } else {
                    throw GraphError(fmt::format(
                        "contradictory timing: node {} must finish before node {} deletes {} but "
                        "their intervals overlap",
                        req.node, th.node, pddl::print_ground_atom(th.atom)));
                }
            }
        }
    };
    order_against(deletions, true);
    order_against(additions, false);

    // Cycle check (defensive: forward-in-time edges cannot cycle).
    {
        std::map<int, std::set<int>> succ;
        std::map<int, int> indeg;
        for (const auto& n : g.nodes) indeg[n.index] = 0;
        for (const auto& e : g.edges)
            if (succ[e.from].insert(e.to).second) indeg[e.to]++;
        std::vector<int> queue;
        for (const auto& [n, d] : indeg)
            if (d == 0) queue.push_back(n);
        size_t seen = 0;
        while (!queue.empty()) {
            int n = queue.back();
            queue.pop_back();
            ++seen;
            for (int s : succ[n])
                if (--indeg[s] == 0) queue.push_back(s);
        }
        if (seen != g.nodes.size())
            throw GraphError("dependency graph is cyclic (invalid plan)");
    }
    return g;
}

std::vector<int> roots(const PlanGraph& g) {
    std::vector<int> out;
    std::set<int> has_in;
    for (const auto& e : g.edges) has_in.insert(e.to);
    for (const auto& n : g.nodes)
        if (!has_in.count(n.index)) out.push_back(n.index);
    return out;
}

std::vector<std::vector<int>> flows(const PlanGraph& g) {
    std::vector<std::vector<int>> out;
    std::map<int, std::set<int>> succ;
    for (const auto& e : g.edges) succ[e.from].insert(e.to);
    std::vector<int> path;
    std::function<void(int)> walk = [&](int node) {
        path.push_back(node);
        const auto& next = succ[node];
        if (next.empty()) {
            out.push_back(path);
        } else {
            for (int s : next) walk(s);
        }
        path.pop_back();
    };
    for (int r : roots(g)) walk(r);
    return out;
}

std::string to_dot(const PlanGraph& g) {
    std::string out = "digraph plan {\n  rankdir=TB;\n";
    for (const auto& n : g.nodes)
        out += fmt::format("  n{} [label=\"{}: {} @{:.3f}\"];\n", n.index, n.index,
                           planner::grounded_signature(n.action), n.t_start);
    for (const auto& e : g.edges) {
        const std::string label =
            (e.reason == EdgeReason::Establishes
                 ? (e.negated ? "not " : "") + pddl::print_ground_atom(e.atom)
                 : "orders " + pddl::print_ground_atom(e.atom));
        out += fmt::format("  n{} -> n{} [label=\"{}\"{}];\n", e.from, e.to, label,
                           e.reason == EdgeReason::Orders ? ", style=dashed" : "");
    }
    out += "}\n";
    return out;
}

}  // namespace planexec::graph
