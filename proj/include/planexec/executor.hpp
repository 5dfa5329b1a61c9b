#pragma once

#include <memory>
#include <optional>
#include <ostream>

#include "planexec/bt.hpp"
#include "planexec/hub.hpp"
#include "planexec/solver.hpp"

namespace planexec::executor {

struct ExecutorConfig {
    planner::SolverSpec solver;
    double tick_period = 0.1;       // seconds between BT ticks
    double wait_timeout = -1.0;     // at-start requirement wait; <0 = unbounded
    double retry_interval = 1.0;    // auction REQUEST retry
    double feedback_period = 0.5;   // performer FEEDBACK cadence
    std::string exec_id = "exec-1";
};

enum class RunState { Idle, Planning, Executing, Succeeded, Failed, Cancelled };

const char* to_string(RunState s);

struct ActionRunStatus {
    planner::PlanItem item;
    bt::Phase phase = bt::Phase::Pending;
    double completion = 0.0;
    std::string detail;
};

struct PlanRunStatus {
    int plan_id = 0;
    RunState state = RunState::Idle;
    std::string failure_reason;
    std::vector<ActionRunStatus> actions;
    double t_start = 0.0;
    double t_end = 0.0;
};

/// Orchestrates one plan at a time: solve, build the dependency graph,
/// compile the behavior tree, tick it, dispatch actions through auctions,
/// apply effects on the tick thread and stream status updates.
class Executor {
public:
    Executor(kb::KnowledgeBase& kb, auction::Hub& hub, Reactor& reactor, ExecutorConfig cfg = {});
    ~Executor();

    /// Solves for the current goal and starts executing. Returns the plan id.
    /// A satisfied goal succeeds immediately with zero actions; no-plan ends
    /// in Failed("no_plan"). Solver errors propagate.
    int execute_goal();

    /// Executes a pre-made plan (already validated against the live state).
    int execute_plan(const planner::Plan& plan);

    /// Cancels the running plan: every in-flight action receives CANCEL.
    /// Effects already applied stay applied. Returns false when idle.
    bool cancel();

    PlanRunStatus status() const;
    bool running() const;

    /// Status stream: invoked on every state change (tick thread).
    void on_status(std::function<void(const PlanRunStatus&)> fn) { listener_ = std::move(fn); }

    /// Newline-delimited JSON event records.
    void set_event_log(std::ostream* out) { event_log_ = out; }

    const graph::PlanGraph* current_graph() const { return graph_ ? &*graph_ : nullptr; }

private:
    class AuctionDispatcher;

    int launch(const planner::Plan& plan);
    void tick();
    void arm_tick(double delay);
    void finish_run(RunState state, const std::string& reason);
    void publish_status();
    void log_event(const std::string& kind, int node, const std::string& detail);

    kb::KnowledgeBase& kb_;
    auction::Hub& hub_;
    Reactor& reactor_;
    ExecutorConfig cfg_;

    int next_plan_id_ = 1;
    PlanRunStatus status_;
    std::optional<planner::Plan> plan_;
    std::optional<graph::PlanGraph> graph_;
    std::optional<bt::BehaviorTree> tree_;
    std::unique_ptr<AuctionDispatcher> dispatcher_;
    bool tick_armed_ = false;
    Reactor::TimerId tick_timer_ = 0;
    bool tick_requested_ = false;
    std::uint64_t next_auction_seq_ = 1;
    std::function<void(const PlanRunStatus&)> listener_;
    std::ostream* event_log_ = nullptr;
    std::shared_ptr<bool> alive_ = std::make_shared<bool>(true);
};

}  // namespace planexec::executor
