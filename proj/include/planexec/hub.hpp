#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <ostream>
#include <thread>

#include "planexec/auction.hpp"
#include "planexec/reactor.hpp"

namespace planexec::auction {

/// Shared channel both auction sides publish to and receive from.
class Hub {
public:
    using Handler = std::function<void(const AuctionMessage&)>;

    virtual ~Hub() = default;
    virtual int subscribe(Handler handler) = 0;
    virtual void unsubscribe(int id) = 0;
    /// Delivers to every subscriber, including the sender's own endpoint.
    /// Throws TransportError after shutdown.
    virtual void publish(const AuctionMessage& m) = 0;
    virtual void shutdown() = 0;
};

/// Default transport: delivery through the reactor, at-least-once and
/// ordered per sender (FIFO). Full traffic can be teed to a log stream as
/// `<time>\t<wire record>` lines.
class InProcessHub final : public Hub {
public:
    explicit InProcessHub(Reactor& reactor) : reactor_(reactor) {}

    int subscribe(Handler handler) override;
    void unsubscribe(int id) override;
    void publish(const AuctionMessage& m) override;
    void shutdown() override;

    void tee_to(std::ostream* log) { log_ = log; }

private:
    Reactor& reactor_;
    std::map<int, std::shared_ptr<Handler>> handlers_;
    int next_id_ = 1;
    bool down_ = false;
    std::ostream* log_ = nullptr;
};

/// Best-effort datagram transport on a UDP group/port (multicast when the
/// address is a multicast group, plain unicast otherwise). The protocol's
/// retries cover datagram loss. Received records are decoded and dispatched
/// on the reactor.
class UdpHub final : public Hub {
public:
    UdpHub(Reactor& reactor, const std::string& address, std::uint16_t port);
    ~UdpHub() override;

    int subscribe(Handler handler) override;
    void unsubscribe(int id) override;
    void publish(const AuctionMessage& m) override;
    void shutdown() override;

private:
    void receive_loop();

    Reactor& reactor_;
    std::string address_;
    std::uint16_t port_;
    int send_fd_ = -1;
    int recv_fd_ = -1;
    std::thread receiver_;
    std::mutex mutex_;
    std::map<int, std::shared_ptr<Handler>> handlers_;
    int next_id_ = 1;
    std::atomic<bool> down_{false};
};

}  // namespace planexec::auction
