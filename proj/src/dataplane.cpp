#include "sgsim/dataplane.hpp"

#include <cmath>

#include "sgsim/queueing.hpp"

namespace sgsim {

namespace {
constexpr std::uint32_t kPortTxDone = 1;
constexpr std::uint32_t kMonitorSample = 1;
} // namespace

std::pair<FlowRule*, bool> FlowTable::install(const FlowKey& flow, int out_port, SimTime now) {
    auto [it, inserted] = rules_.try_emplace(flow.key());
    FlowRule& rule = it->second;
    if (!inserted && rule.out_port == out_port) {
        return {&rule, false};
    }
    rule.out_port = out_port;
    rule.installed_at = now;
    rule.last_hit = now;
    rule.generation = next_generation_++;
    return {&rule, true};
}

FlowRule* FlowTable::match(const FlowKey& flow) {
    auto it = rules_.find(flow.key());
    return it == rules_.end() ? nullptr : &it->second;
}

bool FlowTable::remove(const FlowKey& flow, std::uint64_t generation) {
    auto it = rules_.find(flow.key());
    if (it == rules_.end() || it->second.generation != generation) return false;
    rules_.erase(it);
    return true;
}

SwitchPort::SwitchPort(Engine& engine, PortSink& sink, int port_id, NodeId owner,
                       NodeId peer, double bandwidth_bps, double prop_delay_us,
                       int capacity)
    : engine_(engine),
      sink_(sink),
      port_id_(port_id),
      owner_(owner),
      peer_(peer),
      bandwidth_bps_(bandwidth_bps),
      prop_delay_us_(prop_delay_us),
      capacity_(capacity) {}

bool SwitchPort::enqueue(Packet* p) {
    if (static_cast<int>(queue_.size()) >= capacity_) {
        ++drops_;
        return false;
    }
    p->enqueued_at = engine_.now();
    queue_.push_back(p);
    if (!busy_) begin_service(false);
    return true;
}

void SwitchPort::begin_service(bool continuing) {
    busy_ = true;
    double service_us = queueing::transmission_time_us(queue_.front()->size_bytes, bandwidth_bps_);
    if (jitter_stream_ && jitter_rate_ > 0.0) {
        service_us += jitter_stream_->exponential(jitter_rate_) * 1e6;
    }
    const double start = continuing ? busy_until_us_ : static_cast<double>(engine_.now());
    busy_until_us_ = start + service_us;
    engine_.schedule(std::max(engine_.now(), ticks_from_us(busy_until_us_)), this, kPortTxDone);
}

void SwitchPort::on_event(const EventContext& ctx) {
    if (ctx.code != kPortTxDone) return;
    Packet* p = queue_.front();
    queue_.pop_front();
    ++tx_packets_;
    tx_bytes_ += p->size_bytes;
    sojourn_ticks_ += static_cast<std::uint64_t>(ctx.now - p->enqueued_at);
    if (!queue_.empty()) begin_service(true);
    else busy_ = false;
    sink_.port_transmitted(*this, p);
}

double SwitchPort::mean_sojourn_us() const {
    if (tx_packets_ == 0) return 0.0;
    return static_cast<double>(sojourn_ticks_) / static_cast<double>(tx_packets_);
}

std::vector<Packet*> SwitchPort::drain() {
    std::vector<Packet*> out(queue_.begin(), queue_.end());
    queue_.clear();
    busy_ = false;
    return out;
}

PortMonitor::PortMonitor(Engine& engine, const SwitchPort& port, SimTime interval,
                         SimTime until)
    : engine_(engine), port_(port), interval_(interval), until_(until) {
    engine_.schedule(engine_.now() + interval_, this, kMonitorSample);
}

void PortMonitor::on_event(const EventContext& ctx) {
    series_.push_back(PortSample{ctx.now, port_.queue_len(), port_.tx_bytes(), port_.drops()});
    if (ctx.now + interval_ <= until_) {
        engine_.schedule(ctx.now + interval_, this, kMonitorSample);
    }
}

} // namespace sgsim
