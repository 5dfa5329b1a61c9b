#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "planexec/model.hpp"

namespace planexec::auction {

using pddl::ActionName;
using pddl::ObjectName;

inline constexpr const char* kProtocolVersion = "PS2A1";
inline constexpr const char* kBroadcast = "*";

enum class MsgType { Request, Response, Confirm, Reject, Feedback, Finish, Cancel };

const char* msg_type_name(MsgType t);

/// One record of the action-auction wire protocol. An auction is identified
/// by (sender of the REQUEST, auction_seq); the sequence number is monotone
/// per client, which disambiguates concurrent auctions on the shared hub.
struct AuctionMessage {
    std::string version = kProtocolVersion;
    MsgType type = MsgType::Request;
    std::string sender;
    std::string recipient = kBroadcast;
    ActionName action;
    std::vector<ObjectName> args;
    std::uint64_t seq = 0;
    double completion = 0.0;  // FEEDBACK/FINISH, in [0, 1]
    bool success = false;     // FINISH
    std::string status_text;

    bool operator==(const AuctionMessage&) const = default;
};

/// Tab-separated, newline-terminated UTF-8 record:
///   version \t type \t sender \t recipient \t action \t arg,arg \t seq
///   \t completion \t success \t status_text \n
/// Tabs and newlines are forbidden inside fields; args carry no commas by
/// construction. Throws CodecError on violations.
std::string encode(const AuctionMessage& m);
AuctionMessage decode(std::string_view record);

/// Per-position argument constraints a performer serves: exact value or "*".
/// The list may be shorter than the action arity (a prefix constraint).
struct PerformerSpec {
    std::string performer_id;
    ActionName action;
    std::vector<std::string> constraints;
};

bool spec_matches(const PerformerSpec& spec, const ActionName& action,
                  const std::vector<ObjectName>& args);

}  // namespace planexec::auction
