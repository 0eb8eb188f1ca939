#include "sgsim/engine.hpp"

#include <stdexcept>
#include <string>

namespace sgsim {

EventHandle Engine::schedule(SimTime at, EventTarget* target, std::uint32_t code,
                             std::uint64_t a, std::uint64_t b) {
    if (at < now_) {
        throw std::logic_error("Engine::schedule: event at t=" + std::to_string(at) +
                               " is in the past (clock=" + std::to_string(now_) + ")");
    }
    const std::uint64_t seq = next_seq_++;
    queue_.push(Ev{at, seq, target, code, a, b});
    return seq;
}

void Engine::cancel(EventHandle handle) {
    cancelled_.insert(handle);
}

SimTime Engine::run_until(SimTime end) {
    while (!queue_.empty() && queue_.top().at < end) {
        Ev ev = queue_.top();
        queue_.pop();
        if (!cancelled_.empty()) {
            auto it = cancelled_.find(ev.seq);
            if (it != cancelled_.end()) {
                cancelled_.erase(it);
                continue;
            }
        }
        now_ = ev.at;
        ++executed_;
        if (trace_on_) trace_.push_back(TraceEntry{ev.at, ev.seq, ev.code});
        ev.target->on_event(EventContext{*this, now_, ev.code, ev.a, ev.b});
    }
    now_ = end;
    return now_;
}

} // namespace sgsim
