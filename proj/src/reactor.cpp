#include "planexec/reactor.hpp"

#include <chrono>

namespace planexec {

Reactor::TimerId VirtualClock::schedule(double delay, std::function<void()> fn) {
    if (delay < 0) delay = 0;
    const Key key{now_ + delay, next_seq_};
    const TimerId id = next_seq_++;
    events_.emplace(key, std::move(fn));
    by_id_.emplace(id, key);
    return id;
}

void VirtualClock::cancel(TimerId id) {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return;
    events_.erase(it->second);
    by_id_.erase(it);
}

bool VirtualClock::run_one() {
    if (events_.empty()) return false;
    auto it = events_.begin();
    now_ = std::max(now_, it->first.t);
    auto fn = std::move(it->second);
    by_id_.erase(it->first.seq);
    events_.erase(it);
    fn();
    return true;
}

void VirtualClock::run_until(double t) {
    while (!events_.empty() && events_.begin()->first.t <= t) run_one();
    now_ = std::max(now_, t);
}

void VirtualClock::run_while_pending(const std::function<bool()>& stop) {
    while (!events_.empty()) {
        if (stop && stop()) return;
        run_one();
    }
}

double WallClockReactor::now() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

Reactor::TimerId WallClockReactor::schedule(double delay, std::function<void()> fn) {
    std::lock_guard lock(mutex_);
    if (delay < 0) delay = 0;
    const Key key{std::chrono::steady_clock::now() +
                      std::chrono::microseconds(static_cast<long>(delay * 1e6)),
                  next_seq_};
    const TimerId id = next_seq_++;
    events_.emplace(key, std::move(fn));
    by_id_.emplace(id, key);
    cv_.notify_all();
    return id;
}

void WallClockReactor::cancel(TimerId id) {
    std::lock_guard lock(mutex_);
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return;
    events_.erase(it->second);
    by_id_.erase(it);
}

void WallClockReactor::run_until(const std::function<bool()>& stop) {
    while (!stop()) {
        std::function<void()> fn;
        {
            std::unique_lock lock(mutex_);
            if (events_.empty()) {
                cv_.wait_for(lock, std::chrono::milliseconds(20));
                continue;
            }
            auto it = events_.begin();
            const auto deadline = it->first.t;
            if (deadline > std::chrono::steady_clock::now()) {
                cv_.wait_until(lock, deadline);
                continue;
            }
            fn = std::move(it->second);
            by_id_.erase(it->first.seq);
            events_.erase(it);
        }
        fn();
    }
}

}  // namespace planexec
