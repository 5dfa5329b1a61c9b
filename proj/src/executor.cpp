#include "planexec/executor.hpp"

#include <fmt/format.h>

#include <nlohmann/json.hpp>

#include "planexec/auction_runtime.hpp"
#include "planexec/printer.hpp"

namespace planexec::executor {

using nlohmann::json;

const char* to_string(RunState s) {
    switch (s) {
        case RunState::Idle: return "idle";
        case RunState::Planning: return "planning";
        case RunState::Executing: return "executing";
        case RunState::Succeeded: return "succeeded";
        case RunState::Failed: return "failed";
        case RunState::Cancelled: return "cancelled";
    }
    return "?";
}

/// Bridges ExecuteAction leaves to auction clients, one per plan node.
class Executor::AuctionDispatcher final : public bt::ActionDispatcher {
public:
    AuctionDispatcher(Executor& owner) : owner_(owner) {}

    void start(int node_index, const planner::GroundedAction& action) override {
        auction::EndpointConfig cfg;
        cfg.retry_interval = owner_.cfg_.retry_interval;
        cfg.feedback_period = owner_.cfg_.feedback_period;
        auto client = std::make_unique<auction::ActionClient>(
            owner_.hub_, owner_.reactor_, owner_.cfg_.exec_id, owner_.next_auction_seq_++,
            action.name, action.args, cfg);
        auto alive = owner_.alive_;
        client->on_update([&owner = owner_, alive] {
            if (!*alive) return;
            // Wake the tree: auction progress may unblock leaves.
            owner.arm_tick(0.0);
        });
        client->start();
        clients_[node_index] = std::move(client);
    }

    Status poll(int node_index) override {
        Status s;
        auto it = clients_.find(node_index);
        if (it == clients_.end()) return s;
        const auto& c = *it->second;
        s.completion = c.completion();
        switch (c.state()) {
            case auction::ClientState::Done:
                s.done = true;
                s.success = c.success();
                s.detail = c.status_text();
                break;
            case auction::ClientState::Cancelled:
                s.done = true;
                s.success = false;
                s.detail = "cancelled";
                break;
            default:
                break;
        }
        return s;
    }

    void cancel(int node_index) override {
        auto it = clients_.find(node_index);
        if (it != clients_.end()) it->second->cancel();
    }

    void cancel_all() {
        for (auto& [idx, client] : clients_) client->cancel();
    }

    bool any_outstanding_request() const {
        for (const auto& [idx, client] : clients_)
            if (client->state() == auction::ClientState::Auctioning) return true;
        return false;
    }

private:
    Executor& owner_;
    std::map<int, std::unique_ptr<auction::ActionClient>> clients_;
};

Executor::Executor(kb::KnowledgeBase& kb, auction::Hub& hub, Reactor& reactor, ExecutorConfig cfg)
    : kb_(kb), hub_(hub), reactor_(reactor), cfg_(std::move(cfg)) {}

Executor::~Executor() {
    *alive_ = false;
    if (tick_armed_) reactor_.cancel(tick_timer_);
}

void Executor::log_event(const std::string& kind, int node, const std::string& detail) {
    if (!event_log_) return;
    json j{{"t", reactor_.now()}, {"plan", status_.plan_id}, {"ev", kind}};
    if (node >= 0) {
        j["node"] = node;
        if (plan_ && node < static_cast<int>(plan_->items.size())) {
            j["action"] = planner::grounded_signature(plan_->items[static_cast<size_t>(node)].action,
                                                      plan_->items[static_cast<size_t>(node)].args);
        }
    }
    if (!detail.empty()) j["detail"] = detail;
    *event_log_ << j.dump() << "\n";
}

void Executor::publish_status() {
    if (tree_) {
        for (auto& [idx, unit] : tree_->units) {
            if (idx < 0 || idx >= static_cast<int>(status_.actions.size())) continue;
            auto& slot = status_.actions[static_cast<size_t>(idx)];
            slot.phase = unit->phase;
            slot.completion = unit->completion;
            slot.detail = unit->failure_reason;
        }
    }
    if (listener_) listener_(status_);
}

int Executor::execute_goal() {
    if (running()) throw std::logic_error("a plan is already executing");
    plan_.reset();
    graph_.reset();
    tree_.reset();
    dispatcher_.reset();
    status_ = PlanRunStatus{};
    status_.plan_id = next_plan_id_++;
    status_.state = RunState::Planning;
    status_.t_start = reactor_.now();
    log_event("plan_state", -1, "planning");
    publish_status();

    const kb::KnowledgeState snapshot = kb_.snapshot();
    std::optional<planner::Plan> plan = planner::solve(kb_.domain(), snapshot, cfg_.solver);
    if (!plan) {
        status_.state = RunState::Failed;
        status_.failure_reason = "no_plan";
        status_.t_end = reactor_.now();
        log_event("plan_state", -1, "failed: no_plan");
        publish_status();
        return status_.plan_id;
    }
    return launch(*plan);
}

int Executor::execute_plan(const planner::Plan& plan) {
    if (running()) throw std::logic_error("a plan is already executing");
    plan_.reset();
    graph_.reset();
    tree_.reset();
    dispatcher_.reset();
    status_ = PlanRunStatus{};
    status_.plan_id = next_plan_id_++;
    status_.state = RunState::Planning;
    status_.t_start = reactor_.now();
    publish_status();
    return launch(plan);
}

int Executor::launch(const planner::Plan& plan) {
    if (plan.empty()) {
        // Satisfied goal: immediate success with zero actions.
        status_.state = RunState::Succeeded;
        status_.t_end = reactor_.now();
        log_event("plan_state", -1, "succeeded (empty plan)");
        publish_status();
        return status_.plan_id;
    }
    plan_ = plan;
    const kb::KnowledgeState snapshot = kb_.snapshot();
    graph_ = graph::build_graph(plan, kb_.domain(), snapshot);
    tree_ = bt::graph_to_bt(*graph_);
    dispatcher_ = std::make_unique<AuctionDispatcher>(*this);
    status_.actions.clear();
    for (const auto& item : plan.items) status_.actions.push_back({item, bt::Phase::Pending, 0, ""});
    status_.state = RunState::Executing;
    log_event("plan_state", -1, "executing");
    publish_status();
    arm_tick(0.0);
    return status_.plan_id;
}

void Executor::arm_tick(double delay) {
    if (status_.state != RunState::Executing) return;
    if (delay == 0.0) {
        if (tick_requested_) return;
        tick_requested_ = true;
        auto alive = alive_;
        reactor_.post([this, alive] {
            if (!*alive) return;
            tick_requested_ = false;
            tick();
        });
        return;
    }
    if (tick_armed_) return;
    tick_armed_ = true;
    auto alive = alive_;
    tick_timer_ = reactor_.schedule(delay, [this, alive] {
        if (!*alive) return;
        tick_armed_ = false;
        tick();
    });
}

void Executor::tick() {
    if (status_.state != RunState::Executing) return;
    bt::ExecContext ctx;
    ctx.kb = &kb_;
    ctx.dispatcher = dispatcher_.get();
    ctx.now = reactor_.now();
    ctx.wait_timeout = cfg_.wait_timeout;
    ctx.event = [this](const std::string& kind, int node, const std::string& detail) {
        log_event(kind, node, detail);
    };

    const std::uint64_t version_before = kb_.version();
    const bt::TickStatus s = tree_->tick(ctx);
    const bool changed = kb_.version() != version_before;

    if (s == bt::TickStatus::Success) {
        finish_run(RunState::Succeeded, "");
        return;
    }
    if (s == bt::TickStatus::Failure) {
        std::string reason = "plan failed";
        for (const auto& [idx, unit] : tree_->units)
            if (unit->phase == bt::Phase::FinishedFail && !unit->failure_reason.empty()) {
                reason = unit->failure_reason;
                break;
            }
        // Abort everything still in flight, as the clients do on plan failure.
        tree_->halt(ctx);
        dispatcher_->cancel_all();
        finish_run(RunState::Failed, reason);
        return;
    }
    publish_status();
    if (changed) arm_tick(0.0);  // cascade: new effects may unblock waiters
    arm_tick(cfg_.tick_period);
}

void Executor::finish_run(RunState state, const std::string& reason) {
    status_.state = state;
    status_.failure_reason = reason;
    status_.t_end = reactor_.now();
    if (tick_armed_) {
        reactor_.cancel(tick_timer_);
        tick_armed_ = false;
    }
    log_event("plan_state", -1,
              reason.empty() ? to_string(state) : fmt::format("{}: {}", to_string(state), reason));
    publish_status();
}

bool Executor::cancel() {
    if (status_.state != RunState::Executing) return false;
    bt::ExecContext ctx;
    ctx.kb = &kb_;
    ctx.dispatcher = dispatcher_.get();
    ctx.now = reactor_.now();
    tree_->halt(ctx);
    dispatcher_->cancel_all();
    finish_run(RunState::Cancelled, "cancelled");
    return true;
}

PlanRunStatus Executor::status() const { return status_; }

bool Executor::running() const {
    return status_.state == RunState::Planning || status_.state == RunState::Executing;
}

}  // namespace planexec::executor
