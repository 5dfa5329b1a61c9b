#pragma once

#include <set>
#include <string>
#include <vector>

#include "planexec/grounding.hpp"
#include "planexec/plan.hpp"

namespace planexec::graph {

using planner::GroundedAction;
using planner::Plan;

struct PlanNode {
    int index = 0;
    planner::PlanItem item;
    GroundedAction action;
    double t_start = 0.0;
    double t_end = 0.0;
};

enum class EdgeReason {
    Establishes,  // producer's effect makes the consumer's condition true
    Orders,       // consumer's requirement must finish before producer deletes
};

struct Edge {
    int from = 0;  // producer
    int to = 0;    // consumer
    EdgeReason reason = EdgeReason::Establishes;
    pddl::GroundAtom atom;
    bool negated = false;  // condition polarity for establishes edges

    auto operator<=>(const Edge&) const = default;
};

struct PlanGraph {
    std::vector<PlanNode> nodes;
    std::set<Edge> edges;

    std::set<int> successors(int node) const;
    std::set<int> producers(int node) const;
    int in_degree(int node) const;
};

/// Builds the action-dependency graph of a validated plan.
///
/// Establisher rule: each positive condition atom links its consumer to the
/// producer with the latest effect time that is visible before the condition's
/// required time (end effects at time T are visible to start/over-all
/// requirements at T; everything else must be strictly earlier). Atoms with no
/// producer must hold initially. Negative condition atoms symmetrically
/// depend on the latest deleter and must otherwise be absent initially.
///
/// Ordering rule: when a node deletes an atom a previous consumer required,
/// and the deletion lands at or after the consumer's requirement window, an
/// orders edge pins deleter after consumer; a deletion that would land inside
/// the window means contradictory timing and raises GraphError.
PlanGraph build_graph(const Plan& plan, const pddl::Domain& domain,
                      const kb::KnowledgeState& init);

/// Nodes with no incoming edges.
std::vector<int> roots(const PlanGraph& g);

/// Maximal root-to-sink paths, in deterministic order.
std::vector<std::vector<int>> flows(const PlanGraph& g);

/// Graphviz rendering with deterministic node ordering.
std::string to_dot(const PlanGraph& g);

}  // namespace planexec::graph
