#ifndef SGSIM_ENGINE_HPP
#define SGSIM_ENGINE_HPP

#include <cstdint>
#include <queue>
#include <unordered_set>
#include <vector>

#include "sgsim/sim_time.hpp"

namespace sgsim {

class Engine;

struct EventContext {
    Engine& engine;
    SimTime now;
    std::uint32_t code;
    std::uint64_t a;
    std::uint64_t b;
};

// Anything that receives scheduled events. Components keep their own state;
// the engine only orders and dispatches.
class EventTarget {
public:
    virtual ~EventTarget() = default;
    virtual void on_event(const EventContext& ctx) = 0;
};

using EventHandle = std::uint64_t;

struct TraceEntry {
    SimTime at;
    std::uint64_t seq;
    std::uint32_t code;
};

// Deterministic discrete-event engine. Events fire in (fire_at, sequence)
// order; equal timestamps execute FIFO by scheduling order. Strictly
// single-threaded; run replications as separate Engine instances.
class Engine {
public:
    SimTime now() const { return now_; }

    // Throws std::logic_error if `at` is in the past: that is a scheduling
    // bug in the caller, not a recoverable condition.
    EventHandle schedule(SimTime at, EventTarget* target, std::uint32_t code = 0,
                         std::uint64_t a = 0, std::uint64_t b = 0);

    void cancel(EventHandle handle);

    // Executes every event with fire_at < end, then advances the clock to
    // exactly `end`. Returns the final clock.
    SimTime run_until(SimTime end);

    bool has_pending() const { return queue_.size() > cancelled_.size(); }
    std::uint64_t executed_count() const { return executed_; }

    void enable_trace(bool on) { trace_on_ = on; }
    const std::vector<TraceEntry>& trace() const { return trace_; }

private:
    struct Ev {
        SimTime at;
        std::uint64_t seq;
        EventTarget* target;
        std::uint32_t code;
        std::uint64_t a;
        std::uint64_t b;
    };
    struct Later {
        bool operator()(const Ev& x, const Ev& y) const {
            if (x.at != y.at) return x.at > y.at;
            return x.seq > y.seq;
        }
    };

    SimTime now_ = 0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t executed_ = 0;
    std::priority_queue<Ev, std::vector<Ev>, Later> queue_;
    std::unordered_set<std::uint64_t> cancelled_;
    bool trace_on_ = false;
    std::vector<TraceEntry> trace_;
};

} // namespace sgsim

#endif
