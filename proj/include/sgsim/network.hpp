#ifndef SGSIM_NETWORK_HPP
#define SGSIM_NETWORK_HPP

#include <functional>
#include <memory>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sgsim/controlplane.hpp"
#include "sgsim/dataplane.hpp"
#include "sgsim/engine.hpp"
#include "sgsim/topology.hpp"

namespace sgsim {

class Network;

// FIFO single-server controller. The service law (s0, alpha, owned switch
// count) lives here; what a processed packet-in *does* is supplied by the
// owner, so the same server runs both the full network and the bench harness.
class Controller : public EventTarget {
public:
    Controller(Engine& engine, int id, ControllerParams params, int inbox_capacity);

    void set_process_hook(std::function<void(Controller&, Packet*)> hook) {
        process_hook_ = std::move(hook);
    }
    void set_free_hook(std::function<void(Packet*)> hook) { free_hook_ = std::move(hook); }
    void set_make_hook(std::function<Packet*(PacketKind, FlowKey, std::uint32_t)> hook) {
        make_hook_ = std::move(hook);
    }

    // Called with an arriving packet-in; takes ownership.
    void receive_packet_in(Packet* p);
    void on_event(const EventContext& ctx) override;
    // Frees anything still queued; used at teardown.
    void abandon_inbox();

    void set_owned(int owned) { owned_ = owned; }
    int owned() const { return owned_; }
    void set_up(bool up);
    bool up() const { return up_; }
    int id() const { return id_; }
    const ControllerParams& params() const { return params_; }
    double effective_service_us() const {
        return params_.s0_us * (1.0 + params_.alpha * owned_);
    }

    std::size_t inbox_len() const { return inbox_.size(); }
    std::uint64_t received() const { return received_; }
    std::uint64_t processed() const { return processed_; }
    std::uint64_t dropped_inbox() const { return dropped_inbox_; }
    std::uint64_t received_while_down() const { return received_while_down_; }
    std::uint64_t lost_on_death() const { return lost_on_death_; }

    // Per-controller copy of installed flow state; converges across peers
    // once syncs settle.
    std::unordered_map<std::uint64_t, std::uint64_t>& view() { return view_; }
    const std::unordered_map<std::uint64_t, std::uint64_t>& view() const { return view_; }
    std::unordered_set<std::uint64_t>& recompute_log() { return recomputed_; }

private:
    void start_service(bool continuing);

    Engine& engine_;
    int id_;
    ControllerParams params_;
    int inbox_capacity_;
    int owned_ = 0;
    bool up_ = true;
    bool busy_ = false;
    double busy_until_us_ = 0.0; // fractional-service anchor within a busy period
    std::uint64_t epoch_ = 0;
    std::deque<Packet*> inbox_;
    std::function<void(Controller&, Packet*)> process_hook_;
    std::function<void(Packet*)> free_hook_;
    std::function<Packet*(PacketKind, FlowKey, std::uint32_t)> make_hook_;

    std::uint64_t received_ = 0;
    std::uint64_t processed_ = 0;
    std::uint64_t dropped_inbox_ = 0;
    std::uint64_t received_while_down_ = 0;
    std::uint64_t lost_on_death_ = 0;
    std::unordered_map<std::uint64_t, std::uint64_t> view_;
    std::unordered_set<std::uint64_t> recomputed_;
};

class SwitchNode : public EventTarget {
public:
    SwitchNode(Network& net, int index);
    void on_event(const EventContext& ctx) override;

    int index() const { return index_; }
    FlowTable& table() { return table_; }
    SwitchPort& port(int id) { return *ports_[id]; }
    const SwitchPort& port(int id) const { return *ports_[id]; }
    int port_count() const { return static_cast<int>(ports_.size()); }
    int port_toward(NodeId peer) const;
    std::size_t miss_buffer_len() const { return miss_buffer_.size(); }

    std::uint64_t packetins_emitted() const { return packetins_emitted_; }
    std::uint64_t rules_rejected() const { return rules_rejected_; }

private:
    friend class Network;
    struct Buffered {
        Packet* p;
        SimTime deadline;
    };

    void handle_packet(Packet* p);
    void emit_packet_in(const FlowKey& flow);
    void install_rule(const FlowKey& flow, int out_port, int issuer);
    void purge_expired_buffer(SimTime now);

    Network& net_;
    int index_;
    FlowTable table_;
    std::deque<Buffered> miss_buffer_;
    std::vector<std::unique_ptr<SwitchPort>> ports_;   // data ports, peer-sorted
    std::vector<std::unique_ptr<SwitchPort>> uplinks_; // control uplink per controller
    std::uint64_t packetins_emitted_ = 0;
    std::uint64_t rules_rejected_ = 0;
};

class HostNode : public EventTarget {
public:
    HostNode(Network& net, int index);
    void on_event(const EventContext& ctx) override;

    int index() const { return index_; }
    SwitchPort& egress() { return *egress_; }
    std::uint64_t rx_packets() const { return rx_packets_; }
    std::uint64_t rx_bytes() const { return rx_bytes_; }
    double last_latency_us() const { return last_latency_us_; }

    void set_receive_hook(std::function<void(const Packet&)> hook) {
        receive_hook_ = std::move(hook);
    }

private:
    friend class Network;
    Network& net_;
    int index_;
    std::unique_ptr<SwitchPort> egress_;
    std::uint64_t rx_packets_ = 0;
    std::uint64_t rx_bytes_ = 0;
    double last_latency_us_ = 0.0;
    std::function<void(const Packet&)> receive_hook_;
};

struct NetworkCounters {
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped_port = 0;
    std::uint64_t dropped_miss_buffer = 0;
    std::uint64_t dropped_miss_ttl = 0;
    std::uint64_t dropped_no_master = 0;
    std::uint64_t misrouted = 0;

    std::uint64_t packetins_sent = 0;
    std::uint64_t flowmods_sent = 0;
    std::uint64_t ctrl_dropped_port = 0;
    std::uint64_t rules_expired_hard = 0;
    std::uint64_t rules_expired_idle = 0;
    std::uint64_t total_outages = 0;

    std::uint64_t dropped_data_total() const {
        return dropped_port + dropped_miss_buffer + dropped_miss_ttl + misrouted;
    }
};

struct FlowStats {
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
};

// One simulated smart-grid network: topology-driven data plane plus the
// controller cluster, all inside a single Engine. Everything is owned here;
// scenarios talk to it through hosts, hooks, and the control ops.
class Network : public PortSink, public EventTarget {
public:
    Network(Engine& engine, const Topology& topo, const ClusterConfig& cluster,
            const DataplaneParams& dataplane, std::uint64_t seed);
    ~Network() override;

    Network(const Network&) = delete;
    Network& operator=(const Network&) = delete;

    Engine& engine() { return engine_; }
    const Topology& topology() const { return topo_; }
    const ClusterConfig& cluster_config() const { return cluster_; }
    const DataplaneParams& dataplane_params() const { return dp_; }

    HostNode& host(int index) { return *hosts_[index - 1]; }
    SwitchNode& switch_node(int index) { return *switches_[index - 1]; }
    Controller& controller(int id) { return *controllers_[id]; }
    int controller_count() const { return static_cast<int>(controllers_.size()); }

    Packet* make_packet(PacketKind kind, FlowKey flow, std::uint32_t size_bytes);
    void free_packet(Packet* p);
    // Sends from a host's egress port; counts as generated traffic.
    void host_send(int host_index, Packet* p);

    void set_delivery_hook(std::function<void(const Packet&, SimTime)> hook) {
        delivery_hook_ = std::move(hook);
    }

    void fail_controller(int id, SimTime at);
    void recover_controller(int id, SimTime at);
    const std::vector<int>& mastership() const { return mastership_; }
    std::uint64_t mastership_version() const { return mastership_version_; }
    SimTime last_remaster_at() const { return last_remaster_at_; }
    SimTime last_routed_at(int controller_id) const { return last_routed_at_[controller_id]; }

    const std::vector<NodeId>& path_between_hosts(int src, int dst);

    const NetworkCounters& counters() const { return counters_; }
    std::unordered_map<std::uint64_t, FlowStats> flow_stats() const { return flow_stats_; }

    // Structural conservation check: generated == delivered + dropped + live.
    // Returns live (in-queue + buffered + in-flight) data packets.
    std::uint64_t audit_conservation(bool also_per_flow = true) const;

    // test hook: deliver a raw FlowMod to a switch
    void inject_flowmod(int switch_index, FlowKey flow, int out_port, int issuer_controller);

    // internal plumbing (used by node classes)
    void port_transmitted(SwitchPort& port, Packet* p) override;
    void on_event(const EventContext& ctx) override;
    void deliver(NodeId to, Packet* p, double delay_us);
    void count_generated(const Packet& p);
    void count_delivered(const Packet& p, SimTime now);
    void drop_packet(Packet* p, std::uint64_t NetworkCounters::* counter);
    void process_packet_in(Controller& c, Packet* pin);
    RandomStream* jitter_stream_for(SwitchPort& port);

private:
    EventTarget* target_of(NodeId n);
    void apply_mastership();
    void remaster_now();

    Engine& engine_;
    Topology topo_; // owned copy; immutable after construction
    ClusterConfig cluster_;
    DataplaneParams dp_;
    std::uint64_t seed_;

    std::vector<std::unique_ptr<HostNode>> hosts_;
    std::vector<std::unique_ptr<SwitchNode>> switches_;
    std::vector<std::unique_ptr<Controller>> controllers_;
    std::vector<std::vector<std::unique_ptr<SwitchPort>>> ctrl_down_ports_;
    std::vector<std::unique_ptr<RandomStream>> jitter_streams_;

    std::vector<int> mastership_;
    std::uint64_t mastership_version_ = 0;
    SimTime last_remaster_at_ = 0;
    std::vector<SimTime> last_routed_at_;

    std::uint64_t next_packet_id_ = 1;
    std::unordered_set<Packet*> live_packets_;
    NetworkCounters counters_;
    std::unordered_map<std::uint64_t, FlowStats> flow_stats_;
    std::unordered_map<std::uint64_t, std::vector<NodeId>> path_cache_;
    std::uint64_t global_flow_version_ = 0;

    std::function<void(const Packet&, SimTime)> delivery_hook_;

    friend class SwitchNode;
    friend class HostNode;
};

} // namespace sgsim

#endif
