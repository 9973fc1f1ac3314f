#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace routersim::engine {

// Simulation time in seconds. Resolution is limited by double precision;
// all protocol periods are >= 1 ns so (time, sequence) ordering is exact
// when equal times are computed identically.
using SimTime = double;

// Cancellation token shared between the queue entry and the caller.
class EventHandle {
public:
    EventHandle() = default;
    explicit EventHandle(std::shared_ptr<bool> flag) : cancelled_(std::move(flag)) {}

    // Returns true if the event was still pending and is now cancelled.
    bool cancel() {
        if (!cancelled_ || *cancelled_) return false;
        *cancelled_ = true;
        return true;
    }

private:
    std::shared_ptr<bool> cancelled_;
};

// Deterministic single-threaded event scheduler. Events fire in
// (fire_time, sequence) order; the sequence counter makes simultaneous
// events execute in scheduling order.
class Engine {
public:
    SimTime now() const { return now_; }

    EventHandle schedule(SimTime fire_time, std::string tag, std::function<void()> action) {
        if (fire_time < now_) {
            throw std::invalid_argument("Engine::schedule: fire_time " + std::to_string(fire_time) +
                                        " precedes current time " + std::to_string(now_));
        }
        auto cancelled = std::make_shared<bool>(false);
        queue_.push(Entry{fire_time, next_sequence_++, std::move(tag), std::move(action), cancelled});
        ++scheduled_count_;
        return EventHandle(cancelled);
    }

    // Processes every pending event with fire_time <= t_end, then advances
    // the clock to t_end. Returns the number of events executed.
    std::size_t run_until(SimTime t_end) {
        if (t_end < now_) throw std::invalid_argument("Engine::run_until: t_end precedes current time");
        std::size_t executed = 0;
        stop_requested_ = false;
        while (!queue_.empty() && !stop_requested_) {
            const Entry& top = queue_.top();
            if (top.fire_time > t_end) break;
            Entry entry = top;
            queue_.pop();
            if (*entry.cancelled) {
                ++cancelled_count_;
                continue;
            }
            now_ = entry.fire_time;
            if (tracing_) trace_.emplace_back(entry.fire_time, entry.tag);
            ++processed_count_;
            ++executed;
            entry.action();
        }
        if (!stop_requested_) now_ = t_end;
        return executed;
    }

    // Stops the current run_until loop after the active event returns.
    void request_stop() { stop_requested_ = true; }

    void enable_trace() { tracing_ = true; }
    const std::vector<std::pair<SimTime, std::string>>& trace() const { return trace_; }

    // Audit counters: scheduled == processed + cancelled + pending.
    std::uint64_t scheduled_count() const { return scheduled_count_; }
    std::uint64_t processed_count() const { return processed_count_; }
    std::uint64_t cancelled_count() const { return cancelled_count_; }
    std::size_t pending_count() const { return queue_.size(); }

private:
    struct Entry {
        SimTime fire_time;
        std::uint64_t sequence;
        std::string tag;
        std::function<void()> action;
        std::shared_ptr<bool> cancelled;
    };
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
            return a.sequence > b.sequence;
        }
    };

    SimTime now_ = 0.0;
    std::uint64_t next_sequence_ = 0;
    std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
    bool stop_requested_ = false;
    bool tracing_ = false;
    std::vector<std::pair<SimTime, std::string>> trace_;
    std::uint64_t scheduled_count_ = 0;
    std::uint64_t processed_count_ = 0;
    std::uint64_t cancelled_count_ = 0;
};

// Labeled PRNG stream. The state is seeded from (master_seed, label) so
// adding streams never perturbs the draws of existing ones, and the same
// (seed, label) pair reproduces the same sequence on every platform.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::string label)
        : label_(std::move(label)), rng_(derive_seed(master_seed, label_)) {}

    const std::string& label() const { return label_; }

    std::uint64_t next_u64() { return rng_(); }

    // Uniform draw in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    static std::uint64_t derive_seed(std::uint64_t master_seed, const std::string& label) {
        // FNV-1a over the label, then splitmix64 finalization with the
        // master seed folded in.
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char c : label) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        std::uint64_t z = master_seed ^ h;
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::string label_;
    std::mt19937_64 rng_;
};

}  // namespace routersim::engine
