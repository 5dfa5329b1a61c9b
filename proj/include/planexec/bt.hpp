#pragma once

#include <functional>
#include <map>
#include <memory>
#include <ostream>

#include "planexec/knowledge.hpp"
#include "planexec/plan_graph.hpp"

namespace planexec::bt {

enum class TickStatus { Success, Failure, Running };
enum class Phase { Pending, Started, Executing, FinishedOk, FinishedFail };

const char* to_string(TickStatus s);
const char* to_string(Phase p);

/// Shared per-action record: the action-unit leaves write it, join-waiting
/// branches and the executor's status read it. Phases move forward only.
struct ActionUnitState {
    int node_index = 0;
    planner::GroundedAction action;
    Phase phase = Phase::Pending;
    double completion = 0.0;
    std::string failure_reason;
    double t_started = -1.0;
    double t_finished = -1.0;

    void advance(Phase p) {
        if (static_cast<int>(p) > static_cast<int>(phase)) phase = p;
    }
    bool finished() const { return phase == Phase::FinishedOk || phase == Phase::FinishedFail; }
};

/// How ExecuteAction leaves reach the outside world (the auction bus in
/// production; test doubles in unit tests).
class ActionDispatcher {
public:
    struct Status {
        bool done = false;
        bool success = false;
        double completion = 0.0;
        std::string detail;
    };

    virtual ~ActionDispatcher() = default;
    virtual void start(int node_index, const planner::GroundedAction& action) = 0;
    virtual Status poll(int node_index) = 0;
    virtual void cancel(int node_index) = 0;
};

/// Mutable context threaded through every tick.
struct ExecContext {
    kb::KnowledgeBase* kb = nullptr;
    ActionDispatcher* dispatcher = nullptr;
    double now = 0.0;
    double wait_timeout = -1.0;  // <0: wait forever on at-start requirements
    /// Event hook for logs/ordering assertions: (kind, node_index, detail).
    std::function<void(const std::string&, int, const std::string&)> event;

    void emit(const std::string& kind, int node, const std::string& detail = "") const {
        if (event) event(kind, node, detail);
    }
};

class Node {
public:
    virtual ~Node() = default;
    virtual TickStatus tick(ExecContext& ctx) = 0;
    /// Aborts anything in flight below this node (plan cancel / failure).
    virtual void halt(ExecContext& ctx) = 0;
    virtual void dump(std::ostream& out, int indent) const = 0;
};

using NodePtr = std::unique_ptr<Node>;

NodePtr make_sequence(std::vector<NodePtr> children);
NodePtr make_parallel(std::vector<NodePtr> children);

/// The 5-part action unit: wait for at-start requirements, apply at-start
/// effects, run the over-all check reactively around the execution leaf,
/// check at-end requirements, apply at-end effects.
NodePtr expand_action_unit(std::shared_ptr<ActionUnitState> unit);

/// RUNNING until the referenced unit finishes; FAILURE when it failed.
NodePtr make_wait_for_completion(std::shared_ptr<ActionUnitState> unit);

struct BehaviorTree {
    NodePtr root;
    /// Units by plan node index, shared with the tree's leaves.
    std::map<int, std::shared_ptr<ActionUnitState>> units;

    TickStatus tick(ExecContext& ctx) { return root->tick(ctx); }
    void halt(ExecContext& ctx) { root->halt(ctx); }
    std::string dump_text() const;
    std::string dump_dot() const;
};

/// Compiles a plan graph into a tree: one parallel branch per root flow,
/// successors chained in sequence, diverging successors in parallel. A join
/// node's full action unit lives on the branch from its smallest producer
/// index; every other incoming branch ends in a wait-for-completion leaf.
BehaviorTree graph_to_bt(const graph::PlanGraph& g);

}  // namespace planexec::bt
