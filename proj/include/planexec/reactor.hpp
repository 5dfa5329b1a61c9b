#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>

namespace planexec {

/// Event scheduling abstraction. The executor, auction endpoints and the
/// simulation all run against it, so the same code runs on wall-clock time or
/// on a deterministic virtual clock.
class Reactor {
public:
    using TimerId = std::uint64_t;

    virtual ~Reactor() = default;
    virtual double now() const = 0;
    /// Schedules `fn` to run `delay` seconds from now. Delay 0 means "after
    /// the currently running event".
    virtual TimerId schedule(double delay, std::function<void()> fn) = 0;
    virtual void cancel(TimerId id) = 0;

    TimerId post(std::function<void()> fn) { return schedule(0.0, std::move(fn)); }
};

/// Deterministic discrete-event clock. Events fire in timestamp order, FIFO
/// within equal timestamps. Single-threaded.
class VirtualClock final : public Reactor {
public:
    double now() const override { return now_; }
    TimerId schedule(double delay, std::function<void()> fn) override;
    void cancel(TimerId id) override;

    /// Runs the earliest pending event; returns false when idle.
    bool run_one();
    /// Fires everything scheduled up to and including `t`, then sets now = t.
    void run_until(double t);
    /// Runs until `stop` returns true or nothing is pending.
    void run_while_pending(const std::function<bool()>& stop = nullptr);
    size_t pending() const { return events_.size(); }

private:
    struct Key {
        double t;
        std::uint64_t seq;
        bool operator<(const Key& o) const { return t != o.t ? t < o.t : seq < o.seq; }
    };
    double now_ = 0.0;
    std::uint64_t next_seq_ = 1;
    std::map<Key, std::function<void()>> events_;
    std::map<TimerId, Key> by_id_;
};

/// Wall-clock reactor driven by the calling thread; `post` and `schedule` are
/// safe to call from other threads (e.g. a datagram receiver).
class WallClockReactor final : public Reactor {
public:
    double now() const override;
    TimerId schedule(double delay, std::function<void()> fn) override;
    void cancel(TimerId id) override;

    /// Runs events until `stop()` is true, sleeping between deadlines.
    void run_until(const std::function<bool()>& stop);

private:
    struct Key {
        std::chrono::steady_clock::time_point t;
        std::uint64_t seq;
        bool operator<(const Key& o) const { return t != o.t ? t < o.t : seq < o.seq; }
    };
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
    std::uint64_t next_seq_ = 1;
    std::map<Key, std::function<void()>> events_;
    std::map<TimerId, Key> by_id_;
    mutable std::mutex mutex_;
    std::condition_variable cv_;
};

}  // namespace planexec
