#pragma once

#include <optional>

#include "planexec/auction.hpp"

namespace planexec::auction {

/// Side effects requested by a state machine step. The caller (runtime
/// adapter or protocol checker) performs them; the machines themselves never
/// touch a transport or a clock, which keeps them exhaustively checkable.
struct MachineOutputs {
    std::vector<AuctionMessage> send;
    bool arm_retry = false;
    bool disarm_retry = false;
    bool arm_feedback = false;
    bool disarm_feedback = false;
    bool start_work = false;
    bool abort_work = false;

    void merge(MachineOutputs&& o);
};

enum class ClientState { Auctioning, Confirmed, Running, Done, Cancelled };
enum class PerformerState { Inactive, Committed, Active };

const char* to_string(ClientState s);
const char* to_string(PerformerState s);

/// Executor-side half of the auction (one per grounded action execution).
/// Broadcasts REQUEST, confirms the first bidder (the adapter orders
/// simultaneous bids by performer id), rejects all others, consumes FEEDBACK
/// and FINISH, retries unanswered requests, and cancels on demand.
class ClientMachine {
public:
    ClientMachine() = default;
    ClientMachine(std::string client_id, std::uint64_t seq, ActionName action,
                  std::vector<ObjectName> args);

    MachineOutputs start();
    MachineOutputs on_message(const AuctionMessage& m);
    MachineOutputs on_retry_timer();
    MachineOutputs cancel();

    ClientState state() const { return state_; }
    const std::string& performer_id() const { return performer_; }
    double completion() const { return completion_; }
    bool success() const { return success_; }
    const std::string& status_text() const { return status_text_; }
    std::uint64_t seq() const { return seq_; }
    const std::string& client_id() const { return id_; }
    const ActionName& action() const { return action_; }
    const std::vector<ObjectName>& args() const { return args_; }

private:
    AuctionMessage base(MsgType type) const;

    std::string id_;
    std::uint64_t seq_ = 0;
    ActionName action_;
    std::vector<ObjectName> args_;
    ClientState state_ = ClientState::Auctioning;
    std::string performer_;
    double completion_ = 0.0;
    bool success_ = false;
    std::string status_text_;
};

/// Performer-side half. Idle performers bid on matching requests, stay
/// committed to one auction at a time, execute on CONFIRM and report
/// FEEDBACK/FINISH. A CANCEL aborts the work callback.
class PerformerMachine {
public:
    PerformerMachine() = default;
    explicit PerformerMachine(PerformerSpec spec);

    MachineOutputs on_message(const AuctionMessage& m);
    MachineOutputs on_feedback_timer();
    MachineOutputs work_progress(double completion);
    MachineOutputs work_finished(bool success, const std::string& status_text = "");

    PerformerState state() const { return state_; }
    const PerformerSpec& spec() const { return spec_; }
    const std::string& client() const { return client_; }
    std::uint64_t seq() const { return seq_; }
    const ActionName& action() const { return action_; }
    const std::vector<ObjectName>& args() const { return args_; }

private:
    AuctionMessage base(MsgType type) const;
    bool for_my_auction(const AuctionMessage& m) const;

    PerformerSpec spec_;
    PerformerState state_ = PerformerState::Inactive;
    std::string client_;
    std::uint64_t seq_ = 0;
    ActionName action_;
    std::vector<ObjectName> args_;
    double completion_ = 0.0;
};

}  // namespace planexec::auction
