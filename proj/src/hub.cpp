#include "planexec/hub.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <fmt/format.h>

#include <cstring>
#include <vector>

#include "planexec/errors.hpp"

namespace planexec::auction {

// ---------------------------------------------------------------------------
// InProcessHub
// ---------------------------------------------------------------------------

int InProcessHub::subscribe(Handler handler) {
    const int id = next_id_++;
    handlers_[id] = std::make_shared<Handler>(std::move(handler));
    return id;
}

void InProcessHub::unsubscribe(int id) { handlers_.erase(id); }

void InProcessHub::publish(const AuctionMessage& m) {
    if (down_) throw TransportError("hub is shut down");
    if (log_) *log_ << fmt::format("{}\t", reactor_.now()) << encode(m);
    for (auto& [id, handler] : handlers_) {
        auto h = handler;  // keeps the handler alive across unsubscribe
        reactor_.post([h, m] { (*h)(m); });
    }
}

void InProcessHub::shutdown() { down_ = true; }

// ---------------------------------------------------------------------------
// UdpHub
// ---------------------------------------------------------------------------

namespace {

bool is_multicast(const in_addr& addr) {
    const auto host = ntohl(addr.s_addr);
    return (host >> 28) == 0xE;  // 224.0.0.0/4
}

}  // namespace

UdpHub::UdpHub(Reactor& reactor, const std::string& address, std::uint16_t port)
    : reactor_(reactor), address_(address), port_(port) {
    in_addr group{};
    if (inet_pton(AF_INET, address.c_str(), &group) != 1)
        throw TransportError("bad address '" + address + "'");

    send_fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
    recv_fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (send_fd_ < 0 || recv_fd_ < 0) throw TransportError("cannot create UDP socket");

    int one = 1;
    setsockopt(recv_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

    sockaddr_in bind_addr{};
    bind_addr.sin_family = AF_INET;
    bind_addr.sin_port = htons(port);
    bind_addr.sin_addr.s_addr = htonl(INADDR_ANY);
    if (bind(recv_fd_, reinterpret_cast<sockaddr*>(&bind_addr), sizeof bind_addr) != 0)
        throw TransportError(fmt::format("cannot bind UDP port {}", port));

    if (is_multicast(group)) {
        ip_mreq mreq{};
        mreq.imr_multiaddr = group;
        mreq.imr_interface.s_addr = htonl(INADDR_ANY);
        if (setsockopt(recv_fd_, IPPROTO_IP, IP_ADD_MEMBERSHIP, &mreq, sizeof mreq) != 0)
            throw TransportError("cannot join multicast group " + address);
        unsigned char loop = 1;
        setsockopt(send_fd_, IPPROTO_IP, IP_MULTICAST_LOOP, &loop, sizeof loop);
    }

    receiver_ = std::thread([this] { receive_loop(); });
}

UdpHub::~UdpHub() {
    shutdown();
    if (receiver_.joinable()) receiver_.join();
    if (send_fd_ >= 0) close(send_fd_);
    if (recv_fd_ >= 0) close(recv_fd_);
}

void UdpHub::receive_loop() {
    std::vector<char> buf(64 * 1024);
    while (!down_) {
        timeval tv{0, 200 * 1000};
        setsockopt(recv_fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
        const ssize_t n = recv(recv_fd_, buf.data(), buf.size(), 0);
        if (n <= 0) continue;
        AuctionMessage m;
        try {
            m = decode(std::string_view(buf.data(), static_cast<size_t>(n)));
        } catch (const CodecError&) {
            continue;  // stray datagram
        }
        std::vector<std::shared_ptr<Handler>> handlers;
        {
            std::lock_guard lock(mutex_);
            for (auto& [id, h] : handlers_) handlers.push_back(h);
        }
        for (auto& h : handlers) reactor_.post([h, m] { (*h)(m); });
    }
}

int UdpHub::subscribe(Handler handler) {
    std::lock_guard lock(mutex_);
    const int id = next_id_++;
    handlers_[id] = std::make_shared<Handler>(std::move(handler));
    return id;
}

void UdpHub::unsubscribe(int id) {
    std::lock_guard lock(mutex_);
    handlers_.erase(id);
}

void UdpHub::publish(const AuctionMessage& m) {
    if (down_) throw TransportError("hub is shut down");
    const std::string record = encode(m);
    sockaddr_in to{};
    to.sin_family = AF_INET;
    to.sin_port = htons(port_);
    inet_pton(AF_INET, address_.c_str(), &to.sin_addr);
    if (sendto(send_fd_, record.data(), record.size(), 0, reinterpret_cast<sockaddr*>(&to),
               sizeof to) < 0)
        throw TransportError("sendto failed");
}

void UdpHub::shutdown() { down_ = true; }

}  // namespace planexec::auction
