#include "planexec/auction.hpp"

#include <fmt/format.h>

#include <array>
#include <cstdlib>

#include "planexec/errors.hpp"

namespace planexec::auction {
namespace {

constexpr std::array<const char*, 7> kTypeNames = {"REQUEST", "RESPONSE", "CONFIRM", "REJECT",
                                                   "FEEDBACK", "FINISH",   "CANCEL"};

void check_field(const std::string& s, const char* what) {
    if (s.find('\t') != std::string::npos || s.find('\n') != std::string::npos)
        throw CodecError(fmt::format("{} contains a tab or newline", what));
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    size_t start = 0;
    while (true) {
        size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace

const char* msg_type_name(MsgType t) { return kTypeNames[static_cast<size_t>(t)]; }

std::string encode(const AuctionMessage& m) {
    check_field(m.sender, "sender");
    check_field(m.recipient, "recipient");
    check_field(m.status_text, "status_text");
    if (m.sender.empty() || m.recipient.empty()) throw CodecError("empty sender or recipient");
    if (m.completion < 0.0 || m.completion > 1.0)
        throw CodecError("completion outside [0, 1]");
    std::string args;
    for (size_t i = 0; i < m.args.size(); ++i) {
        if (i) args += ',';
        args += m.args[i].str();
    }
    return fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", m.version,
                       msg_type_name(m.type), m.sender, m.recipient, m.action.str(), args, m.seq,
                       m.completion, m.success ? 1 : 0, m.status_text);
}

AuctionMessage decode(std::string_view record) {
    if (record.empty() || record.back() != '\n') throw CodecError("record not newline-terminated");
    record.remove_suffix(1);
    const auto fields = split(record, '\t');
    if (fields.size() != 10)
        throw CodecError(fmt::format("expected 10 fields, got {}", fields.size()));
    AuctionMessage m;
    m.version = std::string(fields[0]);
    if (m.version != kProtocolVersion)
        throw CodecError("unsupported protocol version '" + m.version + "'");
    bool known = false;
    for (size_t i = 0; i < kTypeNames.size(); ++i)
        if (fields[1] == kTypeNames[i]) {
            m.type = static_cast<MsgType>(i);
            known = true;
        }
    if (!known) throw CodecError("unknown message type '" + std::string(fields[1]) + "'");
    m.sender = std::string(fields[2]);
    m.recipient = std::string(fields[3]);
    if (m.sender.empty() || m.recipient.empty()) throw CodecError("empty sender or recipient");
    try {
        m.action = ActionName(fields[4]);
        if (!fields[5].empty())
            for (auto part : split(fields[5], ',')) m.args.emplace_back(part);
    } catch (const ParseError& e) {
        throw CodecError(std::string("malformed action or argument: ") + e.what());
    }
    std::string seq_text(fields[6]);
    char* end = nullptr;
    m.seq = std::strtoull(seq_text.c_str(), &end, 10);
    if (end != seq_text.c_str() + seq_text.size() || seq_text.empty())
        throw CodecError("malformed sequence number");
    std::string comp_text(fields[7]);
    m.completion = std::strtod(comp_text.c_str(), &end);
    if (end != comp_text.c_str() + comp_text.size() || comp_text.empty() || m.completion < 0.0 ||
        m.completion > 1.0)
        throw CodecError("malformed completion");
    if (fields[8] == "1")
        m.success = true;
    else if (fields[8] == "0")
        m.success = false;
    else
        throw CodecError("malformed success flag");
    m.status_text = std::string(fields[9]);
    return m;
}

bool spec_matches(const PerformerSpec& spec, const ActionName& action,
                  const std::vector<ObjectName>& args) {
    if (spec.action != action) return false;
    if (spec.constraints.size() > args.size()) return false;
    for (size_t i = 0; i < spec.constraints.size(); ++i) {
        if (spec.constraints[i] == "*") continue;
        if (spec.constraints[i] != args[i].str()) return false;
    }
    return true;
}

}  // namespace planexec::auction
