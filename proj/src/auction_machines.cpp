#include "planexec/auction_machines.hpp"

namespace planexec::auction {

void MachineOutputs::merge(MachineOutputs&& o) {
    for (auto& m : o.send) send.push_back(std::move(m));
    arm_retry |= o.arm_retry;
    disarm_retry |= o.disarm_retry;
    arm_feedback |= o.arm_feedback;
    disarm_feedback |= o.disarm_feedback;
    start_work |= o.start_work;
    abort_work |= o.abort_work;
}

const char* to_string(ClientState s) {
    switch (s) {
        case ClientState::Auctioning: return "auctioning";
        case ClientState::Confirmed: return "confirmed";
        case ClientState::Running: return "running";
        case ClientState::Done: return "done";
        case ClientState::Cancelled: return "cancelled";
    }
    return "?";
}

const char* to_string(PerformerState s) {
    switch (s) {
        case PerformerState::Inactive: return "INACTIVE";
        case PerformerState::Committed: return "COMMITTED";
        case PerformerState::Active: return "ACTIVE";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// ClientMachine
// ---------------------------------------------------------------------------

ClientMachine::ClientMachine(std::string client_id, std::uint64_t seq, ActionName action,
                             std::vector<ObjectName> args)
    : id_(std::move(client_id)), seq_(seq), action_(std::move(action)), args_(std::move(args)) {}

AuctionMessage ClientMachine::base(MsgType type) const {
    AuctionMessage m;
    m.type = type;
    m.sender = id_;
    m.action = action_;
    m.args = args_;
    m.seq = seq_;
    return m;
}

MachineOutputs ClientMachine::start() {
    MachineOutputs out;
    out.send.push_back(base(MsgType::Request));
    out.arm_retry = true;
    return out;
}

MachineOutputs ClientMachine::on_message(const AuctionMessage& m) {
    MachineOutputs out;
    if (m.sender == id_) return out;           // own traffic on the shared hub
    if (m.seq != seq_ || m.recipient != id_) return out;
    switch (m.type) {
        case MsgType::Response:
            if (state_ == ClientState::Auctioning) {
                state_ = ClientState::Confirmed;
                performer_ = m.sender;
                auto confirm = base(MsgType::Confirm);
                confirm.recipient = m.sender;
                out.send.push_back(std::move(confirm));
                out.disarm_retry = true;
            } else {
                // Late bidders get released, whatever state the auction is in.
                auto reject = base(MsgType::Reject);
                reject.recipient = m.sender;
                out.send.push_back(std::move(reject));
            }
            break;
        case MsgType::Feedback:
            if ((state_ == ClientState::Confirmed || state_ == ClientState::Running) &&
                m.sender == performer_) {
                state_ = ClientState::Running;
                completion_ = m.completion;
            }
            break;
        case MsgType::Finish:
            if ((state_ == ClientState::Confirmed || state_ == ClientState::Running) &&
                m.sender == performer_) {
                state_ = ClientState::Done;
                success_ = m.success;
                completion_ = m.completion;
                status_text_ = m.status_text;
            }
            break;
        default:
            break;
    }
    return out;
}

MachineOutputs ClientMachine::on_retry_timer() {
    MachineOutputs out;
    if (state_ != ClientState::Auctioning) {
        out.disarm_retry = true;
        return out;
    }
    out.send.push_back(base(MsgType::Request));
    out.arm_retry = true;
    return out;
}

MachineOutputs ClientMachine::cancel() {
    MachineOutputs out;
    if (state_ == ClientState::Done || state_ == ClientState::Cancelled) return out;
    const bool had_performer =
        state_ == ClientState::Confirmed || state_ == ClientState::Running;
    state_ = ClientState::Cancelled;
    out.disarm_retry = true;
    auto msg = base(MsgType::Cancel);
    msg.recipient = had_performer ? performer_ : kBroadcast;
    msg.status_text = "cancelled";
    out.send.push_back(std::move(msg));
    return out;
}

// ---------------------------------------------------------------------------
// PerformerMachine
// ---------------------------------------------------------------------------

PerformerMachine::PerformerMachine(PerformerSpec spec) : spec_(std::move(spec)) {}

AuctionMessage PerformerMachine::base(MsgType type) const {
    AuctionMessage m;
    m.type = type;
    m.sender = spec_.performer_id;
    m.recipient = client_;
    m.action = action_;
    m.args = args_;
    m.seq = seq_;
    return m;
}

bool PerformerMachine::for_my_auction(const AuctionMessage& m) const {
    return m.sender == client_ && m.seq == seq_ && m.action == action_;
}

MachineOutputs PerformerMachine::on_message(const AuctionMessage& m) {
    MachineOutputs out;
    if (m.sender == spec_.performer_id) return out;
    switch (m.type) {
        case MsgType::Request:
            if (state_ == PerformerState::Inactive) {
                if (spec_matches(spec_, m.action, m.args)) {
                    state_ = PerformerState::Committed;
                    client_ = m.sender;
                    seq_ = m.seq;
                    action_ = m.action;
                    args_ = m.args;
                    completion_ = 0.0;
                    out.send.push_back(base(MsgType::Response));
                }
            } else if (state_ == PerformerState::Committed && for_my_auction(m)) {
                // The client retried because our bid got lost; bid again.
                out.send.push_back(base(MsgType::Response));
            }
            // Committed or active performers sit out other auctions.
            break;
        case MsgType::Confirm:
            if (state_ == PerformerState::Committed && m.recipient == spec_.performer_id &&
                for_my_auction(m)) {
                state_ = PerformerState::Active;
                out.start_work = true;
                out.arm_feedback = true;
            }
            // Stale CONFIRM while INACTIVE is ignored.
            break;
        case MsgType::Reject:
            if (state_ == PerformerState::Committed && m.recipient == spec_.performer_id &&
                for_my_auction(m)) {
                state_ = PerformerState::Inactive;
            }
            break;
        case MsgType::Cancel:
            if ((m.recipient == spec_.performer_id || m.recipient == kBroadcast) &&
                for_my_auction(m)) {
                if (state_ == PerformerState::Active) {
                    state_ = PerformerState::Inactive;
                    out.abort_work = true;
                    out.disarm_feedback = true;
                    auto fin = base(MsgType::Finish);
                    fin.success = false;
                    fin.completion = completion_;
                    fin.status_text = "cancelled";
                    out.send.push_back(std::move(fin));
                } else if (state_ == PerformerState::Committed) {
                    state_ = PerformerState::Inactive;
                }
            }
            break;
        default:
            break;
    }
    return out;
}

MachineOutputs PerformerMachine::on_feedback_timer() {
    MachineOutputs out;
    if (state_ != PerformerState::Active) {
        out.disarm_feedback = true;
        return out;
    }
    auto fb = base(MsgType::Feedback);
    fb.completion = completion_;
    out.send.push_back(std::move(fb));
    out.arm_feedback = true;
    return out;
}

MachineOutputs PerformerMachine::work_progress(double completion) {
    MachineOutputs out;
    if (state_ != PerformerState::Active) return out;
    completion_ = std::min(1.0, std::max(0.0, completion));
    return out;
}

MachineOutputs PerformerMachine::work_finished(bool success, const std::string& status_text) {
    MachineOutputs out;
    if (state_ != PerformerState::Active) return out;
    state_ = PerformerState::Inactive;
    out.disarm_feedback = true;
    auto fin = base(MsgType::Finish);
    fin.success = success;
    fin.completion = success ? 1.0 : completion_;
    fin.status_text = status_text;
    out.send.push_back(std::move(fin));
    return out;
}

}  // namespace planexec::auction
