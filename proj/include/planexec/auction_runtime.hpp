#pragma once

#include <deque>
#include <memory>

#include "planexec/auction_machines.hpp"
#include "planexec/hub.hpp"
#include "planexec/reactor.hpp"

namespace planexec::auction {

struct EndpointConfig {
    double retry_interval = 1.0;    // REQUEST retry cadence, seconds
    double feedback_period = 0.5;   // FEEDBACK cadence while ACTIVE
};

/// Executor-side auction endpoint (the ActionsMap entry). Messages delivered
/// at the same instant are drained as one batch with RESPONSEs ordered by
/// performer id, so simultaneous bids break ties deterministically.
class ActionClient {
public:
    ActionClient(Hub& hub, Reactor& reactor, std::string client_id, std::uint64_t seq,
                 ActionName action, std::vector<ObjectName> args, EndpointConfig cfg = {});
    ~ActionClient();

    ActionClient(const ActionClient&) = delete;
    ActionClient& operator=(const ActionClient&) = delete;

    void start();
    void cancel();

    ClientState state() const { return machine_.state(); }
    double completion() const { return machine_.completion(); }
    bool success() const { return machine_.success(); }
    const std::string& performer_id() const { return machine_.performer_id(); }
    const std::string& status_text() const { return machine_.status_text(); }
    std::uint64_t seq() const { return machine_.seq(); }

    /// Called after every state-affecting step (on the reactor).
    void on_update(std::function<void()> fn) { update_ = std::move(fn); }

private:
    void pump(MachineOutputs&& out);
    void drain_inbox();

    Hub& hub_;
    Reactor& reactor_;
    ClientMachine machine_;
    EndpointConfig cfg_;
    int sub_id_ = -1;
    std::deque<AuctionMessage> inbox_;
    bool drain_scheduled_ = false;
    Reactor::TimerId retry_timer_ = 0;
    bool retry_armed_ = false;
    std::function<void()> update_;
    std::shared_ptr<bool> alive_ = std::make_shared<bool>(true);
};

/// Handle the work callback uses to report progress and completion, and to
/// learn about cancellation. Safe to retain beyond the callback itself.
class WorkHandle {
public:
    WorkHandle(ActionName action, std::vector<ObjectName> args, std::string performer_id,
               Reactor& reactor)
        : action_(std::move(action)), args_(std::move(args)),
          performer_id_(std::move(performer_id)), reactor_(reactor) {}

    const ActionName& action() const { return action_; }
    const std::vector<ObjectName>& args() const { return args_; }
    const std::string& performer_id() const { return performer_id_; }
    Reactor& reactor() { return reactor_; }

    void progress(double completion);
    void finish(bool success, const std::string& status_text = "");
    /// Registers a hook run when the execution is aborted by CANCEL.
    void on_cancel(std::function<void()> fn) { cancel_hook_ = std::move(fn); }
    bool cancelled() const { return cancelled_; }

private:
    friend class ActionPerformer;
    ActionName action_;
    std::vector<ObjectName> args_;
    std::string performer_id_;
    Reactor& reactor_;
    std::function<void(double)> progress_fn_;
    std::function<void(bool, const std::string&)> finish_fn_;
    std::function<void()> cancel_hook_;
    bool cancelled_ = false;
};

using WorkFn = std::function<void(std::shared_ptr<WorkHandle>)>;

/// Performer-side endpoint: serves matching auctions until shutdown. The
/// work callback runs on CONFIRM; an exception in it reports
/// FINISH(success=false).
class ActionPerformer {
public:
    ActionPerformer(Hub& hub, Reactor& reactor, PerformerSpec spec, WorkFn work,
                    EndpointConfig cfg = {});
    ~ActionPerformer();

    ActionPerformer(const ActionPerformer&) = delete;
    ActionPerformer& operator=(const ActionPerformer&) = delete;

    PerformerState state() const { return machine_.state(); }
    const PerformerSpec& spec() const { return machine_.spec(); }

private:
    void pump(MachineOutputs&& out);
    void drain_inbox();

    Hub& hub_;
    Reactor& reactor_;
    PerformerMachine machine_;
    WorkFn work_;
    EndpointConfig cfg_;
    int sub_id_ = -1;
    std::deque<AuctionMessage> inbox_;
    bool drain_scheduled_ = false;
    Reactor::TimerId feedback_timer_ = 0;
    bool feedback_armed_ = false;
    std::shared_ptr<WorkHandle> active_work_;
    std::shared_ptr<bool> alive_ = std::make_shared<bool>(true);
};

}  // namespace planexec::auction
