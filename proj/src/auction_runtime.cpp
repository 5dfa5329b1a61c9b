#include "planexec/auction_runtime.hpp"

#include <algorithm>

namespace planexec::auction {

// ---------------------------------------------------------------------------
// ActionClient
// ---------------------------------------------------------------------------

ActionClient::ActionClient(Hub& hub, Reactor& reactor, std::string client_id, std::uint64_t seq,
                           ActionName action, std::vector<ObjectName> args, EndpointConfig cfg)
    : hub_(hub),
      reactor_(reactor),
      machine_(std::move(client_id), seq, std::move(action), std::move(args)),
      cfg_(cfg) {
    auto alive = alive_;
    sub_id_ = hub_.subscribe([this, alive](const AuctionMessage& m) {
        if (!*alive) return;
        inbox_.push_back(m);
        if (!drain_scheduled_) {
            drain_scheduled_ = true;
            reactor_.post([this, alive] {
                if (!*alive) return;
                drain_scheduled_ = false;
                drain_inbox();
            });
        }
    });
}

ActionClient::~ActionClient() {
    *alive_ = false;
    if (retry_armed_) reactor_.cancel(retry_timer_);
    hub_.unsubscribe(sub_id_);
}

void ActionClient::start() { pump(machine_.start()); }

void ActionClient::cancel() { pump(machine_.cancel()); }

void ActionClient::drain_inbox() {
    // Simultaneously delivered RESPONSEs are decided by smallest performer id.
    std::deque<AuctionMessage> batch;
    batch.swap(inbox_);
    std::stable_sort(batch.begin(), batch.end(), [](const AuctionMessage& a,
                                                    const AuctionMessage& b) {
        if (a.type == MsgType::Response && b.type == MsgType::Response) return a.sender < b.sender;
        return false;
    });
    MachineOutputs out;
    for (const auto& m : batch) out.merge(machine_.on_message(m));
    pump(std::move(out));
}

void ActionClient::pump(MachineOutputs&& out) {
    for (const auto& m : out.send) hub_.publish(m);
    if (out.disarm_retry && retry_armed_) {
        reactor_.cancel(retry_timer_);
        retry_armed_ = false;
    }
    if (out.arm_retry) {
        if (retry_armed_) reactor_.cancel(retry_timer_);
        auto alive = alive_;
        retry_timer_ = reactor_.schedule(cfg_.retry_interval, [this, alive] {
            if (!*alive) return;
            retry_armed_ = false;
            pump(machine_.on_retry_timer());
        });
        retry_armed_ = true;
    }
    if (update_) update_();
}

// ---------------------------------------------------------------------------
// WorkHandle
// ---------------------------------------------------------------------------

void WorkHandle::progress(double completion) {
    if (progress_fn_) progress_fn_(completion);
}

void WorkHandle::finish(bool success, const std::string& status_text) {
    if (finish_fn_) finish_fn_(success, status_text);
}

// ---------------------------------------------------------------------------
// ActionPerformer
// ---------------------------------------------------------------------------

ActionPerformer::ActionPerformer(Hub& hub, Reactor& reactor, PerformerSpec spec, WorkFn work,
                                 EndpointConfig cfg)
    : hub_(hub), reactor_(reactor), machine_(std::move(spec)), work_(std::move(work)), cfg_(cfg) {
    auto alive = alive_;
    sub_id_ = hub_.subscribe([this, alive](const AuctionMessage& m) {
        if (!*alive) return;
        inbox_.push_back(m);
        if (!drain_scheduled_) {
            drain_scheduled_ = true;
            reactor_.post([this, alive] {
                if (!*alive) return;
                drain_scheduled_ = false;
                drain_inbox();
            });
        }
    });
}

ActionPerformer::~ActionPerformer() {
    *alive_ = false;
    if (feedback_armed_) reactor_.cancel(feedback_timer_);
    hub_.unsubscribe(sub_id_);
}

void ActionPerformer::drain_inbox() {
    std::deque<AuctionMessage> batch;
    batch.swap(inbox_);
    MachineOutputs out;
    for (const auto& m : batch) out.merge(machine_.on_message(m));
    pump(std::move(out));
}

void ActionPerformer::pump(MachineOutputs&& out) {
    if (out.abort_work && active_work_) {
        active_work_->cancelled_ = true;
        if (active_work_->cancel_hook_) active_work_->cancel_hook_();
        active_work_.reset();
    }
    for (const auto& m : out.send) hub_.publish(m);
    if (out.disarm_feedback && feedback_armed_) {
        reactor_.cancel(feedback_timer_);
        feedback_armed_ = false;
    }
    if (out.arm_feedback) {
        if (feedback_armed_) reactor_.cancel(feedback_timer_);
        auto alive = alive_;
        feedback_timer_ = reactor_.schedule(cfg_.feedback_period, [this, alive] {
            if (!*alive) return;
            feedback_armed_ = false;
            pump(machine_.on_feedback_timer());
        });
        feedback_armed_ = true;
    }
    if (out.start_work) {
        auto handle = std::make_shared<WorkHandle>(machine_.action(), machine_.args(),
                                                   machine_.spec().performer_id, reactor_);
        auto alive = alive_;
        handle->progress_fn_ = [this, alive](double c) {
            if (!*alive) return;
            pump(machine_.work_progress(c));
        };
        handle->finish_fn_ = [this, alive, handle_weak = std::weak_ptr<WorkHandle>(handle)](
                                 bool success, const std::string& text) {
            if (!*alive) return;
            // Completions arriving after a cancel are ignored by the machine
            // (it is INACTIVE again), which is the intended semantics.
            if (active_work_ && handle_weak.lock() == active_work_) active_work_.reset();
            pump(machine_.work_finished(success, text));
        };
        active_work_ = handle;
        try {
            work_(handle);
        } catch (const std::exception& e) {
            active_work_.reset();
            pump(machine_.work_finished(false, e.what()));
        }
    }
}

}  // namespace planexec::auction
