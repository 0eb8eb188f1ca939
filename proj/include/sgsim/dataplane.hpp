#ifndef SGSIM_DATAPLANE_HPP
#define SGSIM_DATAPLANE_HPP

#include <cstdint>
#include <deque>
#include <unordered_map>
#include <vector>

#include "sgsim/engine.hpp"
#include "sgsim/rng.hpp"
#include "sgsim/sim_time.hpp"
#include "sgsim/topology.hpp"

namespace sgsim {

enum class PacketKind : std::uint8_t { Data, Ping, Pong, Ack, PacketIn, FlowMod };

// Exact-match flow identity: endpoints plus a traffic class. Flood traffic
// uses one class per packet, which is what makes every flood packet a table
// miss.
struct FlowKey {
    std::uint16_t src = 0;
    std::uint16_t dst = 0;
    std::uint32_t cls = 0;

    std::uint64_t key() const {
        return (static_cast<std::uint64_t>(src) << 48) |
               (static_cast<std::uint64_t>(dst) << 32) | cls;
    }
    static FlowKey from_key(std::uint64_t k) {
        return FlowKey{static_cast<std::uint16_t>(k >> 48),
                       static_cast<std::uint16_t>((k >> 32) & 0xffff),
                       static_cast<std::uint32_t>(k & 0xffffffff)};
    }
    bool operator==(const FlowKey&) const = default;
};

struct Packet {
    std::uint64_t id = 0;
    PacketKind kind = PacketKind::Data;
    FlowKey flow;
    std::uint32_t size_bytes = 0;
    SimTime created_at = 0;
    SimTime enqueued_at = 0;   // set when entering a port queue
    SimTime echo_of_created = -1; // for Pong/Ack: created_at of the packet answered
    // control-message payload
    std::int32_t origin_switch = 0; // PacketIn origin
    std::int32_t out_port = -1;     // FlowMod action
    bool synthetic = false;         // bench-harness packet-in, no path lookup

    bool is_control() const {
        return kind == PacketKind::PacketIn || kind == PacketKind::FlowMod;
    }
};

struct DataplaneParams {
    int port_queue_capacity = 1000;
    int miss_buffer_capacity = 256;
    double miss_buffer_ttl_s = 1.0;
    double flow_idle_timeout_s = 30.0;
    // Rules are refreshed through the controller at this cadence, the way
    // reactive forwarding apps install entries with a finite lifetime. This
    // is what keeps an established flow dependent on a live control plane.
    double flow_hard_timeout_s = 8.0;
    double service_jitter_rate_per_s = 0.0; // 0 = deterministic transmitters
    std::uint32_t control_msg_bytes = 128;
};

struct FlowRule {
    int out_port = -1;
    SimTime installed_at = 0;
    SimTime last_hit = 0;
    std::uint64_t generation = 0;
};

// Per-switch match -> action table. One rule per exact flow key; reinstalling
// the same action refreshes nothing (timers keep running), reinstalling a new
// action replaces the rule outright.
class FlowTable {
public:
    // Returns (rule, freshly_written). freshly_written is false when an
    // identical rule was already present.
    std::pair<FlowRule*, bool> install(const FlowKey& flow, int out_port, SimTime now);
    FlowRule* match(const FlowKey& flow);
    bool remove(const FlowKey& flow, std::uint64_t generation);
    std::size_t size() const { return rules_.size(); }

private:
    std::unordered_map<std::uint64_t, FlowRule> rules_;
    std::uint64_t next_generation_ = 1;
};

class PortSink; // delivers a transmitted packet to the far end of the link

// Output port modeled as a FIFO single-server queue: deterministic wire time
// size*8/bandwidth, plus optional exponential jitter for queueing-model
// validation runs. Finite capacity; arrivals beyond it are tail-dropped.
class SwitchPort : public EventTarget {
public:
    SwitchPort(Engine& engine, PortSink& sink, int port_id, NodeId owner, NodeId peer,
               double bandwidth_bps, double prop_delay_us, int capacity);

    // False when the queue is full; caller owns the dropped packet.
    bool enqueue(Packet* p);
    void on_event(const EventContext& ctx) override;

    void set_jitter(RandomStream* stream, double rate_per_s) {
        jitter_stream_ = stream;
        jitter_rate_ = rate_per_s;
    }

    NodeId owner() const { return owner_; }
    NodeId peer() const { return peer_; }
    int id() const { return port_id_; }
    double prop_delay_us() const { return prop_delay_us_; }
    double bandwidth_bps() const { return bandwidth_bps_; }

    std::size_t queue_len() const { return queue_.size(); }
    std::uint64_t tx_packets() const { return tx_packets_; }
    std::uint64_t tx_bytes() const { return tx_bytes_; }
    std::uint64_t drops() const { return drops_; }
    void count_drop() { ++drops_; }
    // Mean time from enqueue to transmit completion, microseconds.
    double mean_sojourn_us() const;
    std::uint64_t served() const { return tx_packets_; }

    std::vector<Packet*> drain(); // teardown only

private:
    void begin_service(bool continuing);

    Engine& engine_;
    PortSink& sink_;
    int port_id_;
    NodeId owner_;
    NodeId peer_;
    double bandwidth_bps_;
    double prop_delay_us_;
    int capacity_;
    std::deque<Packet*> queue_;
    bool busy_ = false;
    // Real-valued end of the current service. Within a busy period services
    // bill back-to-back off this anchor so sub-tick service times do not
    // accumulate rounding error; an idle port re-anchors on the integer clock.
    double busy_until_us_ = 0.0;
    RandomStream* jitter_stream_ = nullptr;
    double jitter_rate_ = 0.0;

    std::uint64_t tx_packets_ = 0;
    std::uint64_t tx_bytes_ = 0;
    std::uint64_t drops_ = 0;
    std::uint64_t sojourn_ticks_ = 0;
};

class PortSink {
public:
    virtual ~PortSink() = default;
    virtual void port_transmitted(SwitchPort& port, Packet* p) = 0;
};

struct PortSample {
    SimTime at;
    std::size_t queue_len;
    std::uint64_t bytes_sent;
    std::uint64_t drops;
};

// Samples one port's counters at a fixed cadence.
class PortMonitor : public EventTarget {
public:
    PortMonitor(Engine& engine, const SwitchPort& port, SimTime interval, SimTime until);
    void on_event(const EventContext& ctx) override;
    const std::vector<PortSample>& series() const { return series_; }

private:
    Engine& engine_;
    const SwitchPort& port_;
    SimTime interval_;
    SimTime until_;
    std::vector<PortSample> series_;
};

} // namespace sgsim

#endif
