#include "sgsim/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace sgsim {

namespace {
// per-target event codes
constexpr std::uint32_t kArrival = 1;
constexpr std::uint32_t kCtrlSvcDone = 2;
constexpr std::uint32_t kCtrlViewSync = 3;
constexpr std::uint32_t kCtrlRuleRejected = 4;
constexpr std::uint32_t kRuleHardExpiry = 2;
constexpr std::uint32_t kRuleIdleCheck = 3;
constexpr std::uint32_t kNetFail = 1;
constexpr std::uint32_t kNetRecover = 2;
constexpr std::uint32_t kNetRemaster = 3;

Packet* as_packet(std::uint64_t a) { return reinterpret_cast<Packet*>(a); }
std::uint64_t as_arg(Packet* p) { return reinterpret_cast<std::uint64_t>(p); }
} // namespace

// ---------------------------------------------------------------------------
// Controller

Controller::Controller(Engine& engine, int id, ControllerParams params, int inbox_capacity)
    : engine_(engine), id_(id), params_(params), inbox_capacity_(inbox_capacity) {}

void Controller::receive_packet_in(Packet* p) {
    if (!up_) {
        ++received_while_down_;
        free_hook_(p);
        return;
    }
    if (static_cast<int>(inbox_.size()) >= inbox_capacity_) {
        ++dropped_inbox_;
        free_hook_(p);
        return;
    }
    ++received_;
    inbox_.push_back(p);
    if (!busy_) start_service(false);
}

void Controller::start_service(bool continuing) {
    busy_ = true;
    const double start = continuing ? busy_until_us_ : static_cast<double>(engine_.now());
    busy_until_us_ = start + effective_service_us();
    engine_.schedule(std::max(engine_.now(), ticks_from_us(busy_until_us_)), this,
                     kCtrlSvcDone, epoch_);
}

void Controller::on_event(const EventContext& ctx) {
    switch (ctx.code) {
        case kArrival:
            receive_packet_in(as_packet(ctx.a));
            break;
        case kCtrlSvcDone: {
            if (ctx.a != epoch_) return; // the controller died or rejoined meanwhile
            Packet* p = inbox_.front();
            inbox_.pop_front();
            ++processed_;
            process_hook_(*this, p);
            free_hook_(p);
            if (!inbox_.empty()) start_service(true);
            else busy_ = false;
            break;
        }
        case kCtrlViewSync: {
            auto& v = view_[ctx.a];
            v = std::max(v, ctx.b);
            break;
        }
        case kCtrlRuleRejected: {
            if (!up_) return;
            if (!recomputed_.insert(ctx.a).second) return; // recompute only once
            Packet* redo = make_hook_(PacketKind::PacketIn, FlowKey::from_key(ctx.a), 1);
            redo->origin_switch = -1;
            receive_packet_in(redo);
            break;
        }
        default:
            break;
    }
}

void Controller::abandon_inbox() {
    for (Packet* p : inbox_) free_hook_(p);
    inbox_.clear();
    busy_ = false;
}

void Controller::set_up(bool up) {
    if (up_ == up) return;
    up_ = up;
    ++epoch_;
    busy_ = false;
    if (!up) {
        lost_on_death_ += inbox_.size();
        for (Packet* p : inbox_) free_hook_(p);
        inbox_.clear();
    } else if (!inbox_.empty()) {
        start_service(false);
    }
}

// ---------------------------------------------------------------------------
// SwitchNode

SwitchNode::SwitchNode(Network& net, int index) : net_(net), index_(index) {}

int SwitchNode::port_toward(NodeId peer) const {
    for (const auto& p : ports_) {
        if (p->peer() == peer) return p->id();
    }
    return -1;
}

void SwitchNode::purge_expired_buffer(SimTime now) {
    while (!miss_buffer_.empty() && miss_buffer_.front().deadline <= now) {
        net_.drop_packet(miss_buffer_.front().p, &NetworkCounters::dropped_miss_ttl);
        miss_buffer_.pop_front();
    }
}

void SwitchNode::handle_packet(Packet* p) {
    const SimTime now = net_.engine().now();
    purge_expired_buffer(now);
    FlowRule* rule = table_.match(p->flow);
    if (rule) {
        rule->last_hit = now;
        SwitchPort& out = *ports_[rule->out_port];
        if (!out.enqueue(p)) {
            net_.drop_packet(p, &NetworkCounters::dropped_port);
        }
        return;
    }
    // Table miss: the packet-in goes out regardless (an unbuffered request
    // still asks for the rule); the packet itself waits only if there is room.
    emit_packet_in(p->flow);
    if (static_cast<int>(miss_buffer_.size()) >= net_.dataplane_params().miss_buffer_capacity) {
        net_.drop_packet(p, &NetworkCounters::dropped_miss_buffer);
        return;
    }
    miss_buffer_.push_back(Buffered{
        p, now + ticks_from_seconds(net_.dataplane_params().miss_buffer_ttl_s)});
}

void SwitchNode::emit_packet_in(const FlowKey& flow) {
    const int master = net_.mastership()[index_ - 1];
    if (master < 0) {
        ++net_.counters_.dropped_no_master;
        return;
    }
    Packet* pin = net_.make_packet(PacketKind::PacketIn, flow,
                                   net_.dataplane_params().control_msg_bytes);
    pin->origin_switch = index_;
    ++packetins_emitted_;
    ++net_.counters_.packetins_sent;
    net_.last_routed_at_[master] = net_.engine().now();
    if (!uplinks_[master]->enqueue(pin)) {
        ++net_.counters_.ctrl_dropped_port;
        net_.free_packet(pin);
    }
}

void SwitchNode::install_rule(const FlowKey& flow, int out_port, int issuer) {
    const SimTime now = net_.engine().now();
    if (out_port < 0 || out_port >= static_cast<int>(ports_.size())) {
        ++rules_rejected_;
        if (issuer >= 0 && issuer < net_.controller_count()) {
            net_.engine().schedule(
                now + ticks_from_us(net_.cluster_config().control_link_prop_us),
                &net_.controller(issuer), kCtrlRuleRejected, flow.key());
        }
        return;
    }
    auto [rule, fresh] = table_.install(flow, out_port, now);
    if (fresh) {
        const auto& dp = net_.dataplane_params();
        if (dp.flow_hard_timeout_s > 0.0) {
            net_.engine().schedule(now + ticks_from_seconds(dp.flow_hard_timeout_s), this,
                                   kRuleHardExpiry, flow.key(), rule->generation);
        }
        if (dp.flow_idle_timeout_s > 0.0) {
            net_.engine().schedule(now + ticks_from_seconds(dp.flow_idle_timeout_s), this,
                                   kRuleIdleCheck, flow.key(), rule->generation);
        }
    }
    // Release buffered packets of this flow in arrival order.
    purge_expired_buffer(now);
    if (!miss_buffer_.empty()) {
        std::deque<Buffered> keep;
        std::vector<Packet*> release;
        for (Buffered& b : miss_buffer_) {
            if (b.p->flow == flow) release.push_back(b.p);
            else keep.push_back(b);
        }
        miss_buffer_.swap(keep);
        for (Packet* p : release) {
            rule->last_hit = net_.engine().now();
            if (!ports_[rule->out_port]->enqueue(p)) {
                net_.drop_packet(p, &NetworkCounters::dropped_port);
            }
        }
    }
}

void SwitchNode::on_event(const EventContext& ctx) {
    switch (ctx.code) {
        case kArrival: {
            Packet* p = as_packet(ctx.a);
            if (p->kind == PacketKind::FlowMod) {
                install_rule(p->flow, p->out_port, p->origin_switch);
                net_.free_packet(p);
            } else if (p->kind == PacketKind::PacketIn) {
                net_.drop_packet(p, &NetworkCounters::misrouted);
            } else {
                handle_packet(p);
            }
            break;
        }
        case kRuleHardExpiry: {
            if (table_.remove(FlowKey::from_key(ctx.a), ctx.b)) {
                ++net_.counters_.rules_expired_hard;
            }
            break;
        }
        case kRuleIdleCheck: {
            FlowRule* rule = table_.match(FlowKey::from_key(ctx.a));
            if (!rule || rule->generation != ctx.b) return;
            const SimTime idle = ticks_from_seconds(net_.dataplane_params().flow_idle_timeout_s);
            if (ctx.now - rule->last_hit >= idle) {
                table_.remove(FlowKey::from_key(ctx.a), ctx.b);
                ++net_.counters_.rules_expired_idle;
            } else {
                net_.engine().schedule(rule->last_hit + idle, this, kRuleIdleCheck, ctx.a, ctx.b);
            }
            break;
        }
        default:
            break;
    }
}

// ---------------------------------------------------------------------------
// HostNode

HostNode::HostNode(Network& net, int index) : net_(net), index_(index) {}

void HostNode::on_event(const EventContext& ctx) {
    if (ctx.code != kArrival) return;
    Packet* p = as_packet(ctx.a);
    if (p->is_control() || p->flow.dst != index_) {
        net_.drop_packet(p, &NetworkCounters::misrouted);
        return;
    }
    ++rx_packets_;
    rx_bytes_ += p->size_bytes;
    last_latency_us_ = us_from_ticks(ctx.now - p->created_at);
    net_.count_delivered(*p, ctx.now);
    if (receive_hook_) receive_hook_(*p);
    net_.free_packet(p);
}

// ---------------------------------------------------------------------------
// Network

Network::Network(Engine& engine, const Topology& topo, const ClusterConfig& cluster,
                 const DataplaneParams& dataplane, std::uint64_t seed)
    : engine_(engine), topo_(topo), cluster_(cluster), dp_(dataplane), seed_(seed) {
    const int n_ctrl = cluster_.controller_count();
    last_routed_at_.assign(n_ctrl, -1);

    for (int c = 0; c < n_ctrl; ++c) {
        controllers_.push_back(std::make_unique<Controller>(
            engine_, c, cluster_.params(), cluster_.inbox_capacity));
        controllers_[c]->set_process_hook(
            [this](Controller& ctl, Packet* pin) { process_packet_in(ctl, pin); });
        controllers_[c]->set_free_hook([this](Packet* p) { free_packet(p); });
        controllers_[c]->set_make_hook(
            [this](PacketKind k, FlowKey f, std::uint32_t sz) { return make_packet(k, f, sz); });
    }

    for (int s = 1; s <= topo_.switch_count(); ++s) {
        switches_.push_back(std::make_unique<SwitchNode>(*this, s));
        SwitchNode& sw = *switches_.back();
        const NodeId me{NodeKind::Switch, s};
        int port_id = 0;
        for (NodeId nb : topo_.neighbors(me)) {
            const Link& l = topo_.link(topo_.link_between(me, nb));
            auto port = std::make_unique<SwitchPort>(engine_, *this, port_id++, me, nb,
                                                     l.bandwidth_bps, l.prop_delay_us,
                                                     dp_.port_queue_capacity);
            if (dp_.service_jitter_rate_per_s > 0.0) {
                port->set_jitter(jitter_stream_for(*port), dp_.service_jitter_rate_per_s);
            }
            sw.ports_.push_back(std::move(port));
        }
        for (int c = 0; c < n_ctrl; ++c) {
            sw.uplinks_.push_back(std::make_unique<SwitchPort>(
                engine_, *this, -1, me, NodeId{NodeKind::Controller, c},
                cluster_.control_link_bandwidth_bps, cluster_.control_link_prop_us,
                dp_.port_queue_capacity));
        }
    }

    ctrl_down_ports_.resize(n_ctrl);
    for (int c = 0; c < n_ctrl; ++c) {
        for (int s = 1; s <= topo_.switch_count(); ++s) {
            ctrl_down_ports_[c].push_back(std::make_unique<SwitchPort>(
                engine_, *this, -1, NodeId{NodeKind::Controller, c},
                NodeId{NodeKind::Switch, s}, cluster_.control_link_bandwidth_bps,
                cluster_.control_link_prop_us, dp_.port_queue_capacity));
        }
    }

    for (int h = 1; h <= topo_.host_count(); ++h) {
        hosts_.push_back(std::make_unique<HostNode>(*this, h));
        const NodeId me{NodeKind::Host, h};
        const NodeId sw = topo_.access_switch(h);
        const Link& l = topo_.link(topo_.link_between(me, sw));
        hosts_.back()->egress_ = std::make_unique<SwitchPort>(
            engine_, *this, 0, me, sw, l.bandwidth_bps, l.prop_delay_us,
            dp_.port_queue_capacity);
        if (dp_.service_jitter_rate_per_s > 0.0) {
            hosts_.back()->egress_->set_jitter(jitter_stream_for(*hosts_.back()->egress_),
                                               dp_.service_jitter_rate_per_s);
        }
    }

    remaster_now();
    mastership_version_ = 1;
}

Network::~Network() {
    for (auto& c : controllers_) c->abandon_inbox();
    for (Packet* p : live_packets_) delete p;
    live_packets_.clear();
}

RandomStream* Network::jitter_stream_for(SwitchPort& port) {
    jitter_streams_.push_back(std::make_unique<RandomStream>(
        "port-jitter/" + port.owner().str() + "/" + port.peer().str(), seed_));
    return jitter_streams_.back().get();
}

Packet* Network::make_packet(PacketKind kind, FlowKey flow, std::uint32_t size_bytes) {
    Packet* p = new Packet;
    p->id = next_packet_id_++;
    p->kind = kind;
    p->flow = flow;
    p->size_bytes = size_bytes;
    p->created_at = engine_.now();
    live_packets_.insert(p);
    return p;
}

void Network::free_packet(Packet* p) {
    live_packets_.erase(p);
    delete p;
}

void Network::count_generated(const Packet& p) {
    if (p.is_control()) return;
    ++counters_.generated;
    ++flow_stats_[p.flow.key()].generated;
}

void Network::count_delivered(const Packet& p, SimTime now) {
    ++counters_.delivered;
    ++flow_stats_[p.flow.key()].delivered;
    if (delivery_hook_) delivery_hook_(p, now);
}

void Network::drop_packet(Packet* p, std::uint64_t NetworkCounters::* counter) {
    counters_.*counter += 1;
    if (!p->is_control()) ++flow_stats_[p->flow.key()].dropped;
    free_packet(p);
}

void Network::host_send(int host_index, Packet* p) {
    count_generated(*p);
    HostNode& h = host(host_index);
    if (!h.egress_->enqueue(p)) {
        drop_packet(p, &NetworkCounters::dropped_port);
    }
}

EventTarget* Network::target_of(NodeId n) {
    switch (n.kind) {
        case NodeKind::Host: return hosts_[n.index - 1].get();
        case NodeKind::Switch: return switches_[n.index - 1].get();
        case NodeKind::Controller: return controllers_[n.index].get();
    }
    return nullptr;
}

void Network::deliver(NodeId to, Packet* p, double delay_us) {
    engine_.schedule(engine_.now() + ticks_from_us(delay_us), target_of(to), kArrival,
                     as_arg(p));
}

void Network::port_transmitted(SwitchPort& port, Packet* p) {
    deliver(port.peer(), p, port.prop_delay_us());
}

const std::vector<NodeId>& Network::path_between_hosts(int src, int dst) {
    const std::uint64_t key = (static_cast<std::uint64_t>(src) << 32) | static_cast<std::uint32_t>(dst);
    auto it = path_cache_.find(key);
    if (it != path_cache_.end()) return it->second;
    auto path = topo_.shortest_path({NodeKind::Host, src}, {NodeKind::Host, dst});
    return path_cache_.emplace(key, std::move(path)).first->second;
}

void Network::process_packet_in(Controller& c, Packet* pin) {
    if (pin->synthetic) return; // bench harness handles its own responses
    const auto& path = path_between_hosts(pin->flow.src, pin->flow.dst);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (path[i].kind != NodeKind::Switch) continue;
        const int sw = path[i].index;
        const int out_port = switches_[sw - 1]->port_toward(path[i + 1]);
        Packet* fm = make_packet(PacketKind::FlowMod, pin->flow, dp_.control_msg_bytes);
        fm->out_port = out_port;
        fm->origin_switch = c.id(); // issuer
        ++counters_.flowmods_sent;
        if (!ctrl_down_ports_[c.id()][sw - 1]->enqueue(fm)) {
            ++counters_.ctrl_dropped_port;
            free_packet(fm);
        }
    }
    const std::uint64_t version = ++global_flow_version_;
    c.view()[pin->flow.key()] = version;
    if (cluster_.mode == ClusterMode::DistributedFlat) {
        for (auto& peer : controllers_) {
            if (peer->id() == c.id() || !peer->up()) continue;
            engine_.schedule(engine_.now() + ticks_from_us(cluster_.sync_delay_us),
                             peer.get(), kCtrlViewSync, pin->flow.key(), version);
        }
    }
}

void Network::fail_controller(int id, SimTime at) {
    engine_.schedule(at, this, kNetFail, static_cast<std::uint64_t>(id));
}

void Network::recover_controller(int id, SimTime at) {
    engine_.schedule(at, this, kNetRecover, static_cast<std::uint64_t>(id));
}

void Network::apply_mastership() {
    std::vector<int> owned(controllers_.size(), 0);
    for (int m : mastership_) {
        if (m >= 0) ++owned[m];
    }
    for (std::size_t c = 0; c < controllers_.size(); ++c) {
        controllers_[c]->set_owned(owned[c]);
    }
}

void Network::remaster_now() {
    std::vector<int> ups;
    for (auto& c : controllers_) {
        if (c->up()) ups.push_back(c->id());
    }
    mastership_ = assign_mastership(topo_.switch_count(), ups);
    ++mastership_version_;
    last_remaster_at_ = engine_.now();
    if (ups.empty()) ++counters_.total_outages;
    apply_mastership();
}

void Network::on_event(const EventContext& ctx) {
    switch (ctx.code) {
        case kNetFail: {
            Controller& c = *controllers_[ctx.a];
            if (!c.up()) throw std::logic_error("fail_controller: controller already down");
            c.set_up(false);
            engine_.schedule(
                ctx.now + ticks_from_seconds(cluster_.failure_detection_timeout_s), this,
                kNetRemaster);
            break;
        }
        case kNetRecover: {
            Controller& c = *controllers_[ctx.a];
            if (c.up()) throw std::logic_error("recover_controller: controller already up");
            c.set_up(true);
            // rejoin with the freshest peer state
            for (auto& peer : controllers_) {
                if (peer->id() == c.id() || !peer->up()) continue;
                for (const auto& [k, v] : peer->view()) {
                    auto& mine = c.view()[k];
                    mine = std::max(mine, v);
                }
            }
            engine_.schedule(
                ctx.now + ticks_from_seconds(cluster_.failure_detection_timeout_s), this,
                kNetRemaster);
            break;
        }
        case kNetRemaster:
            remaster_now();
            break;
        default:
            break;
    }
}

void Network::inject_flowmod(int switch_index, FlowKey flow, int out_port,
                             int issuer_controller) {
    Packet* fm = make_packet(PacketKind::FlowMod, flow, dp_.control_msg_bytes);
    fm->out_port = out_port;
    fm->origin_switch = issuer_controller;
    ++counters_.flowmods_sent;
    deliver({NodeKind::Switch, switch_index}, fm, cluster_.control_link_prop_us);
}

std::uint64_t Network::audit_conservation(bool also_per_flow) const {
    std::uint64_t live_data = 0;
    std::unordered_map<std::uint64_t, std::uint64_t> live_per_flow;
    for (const Packet* p : live_packets_) {
        if (p->is_control()) continue;
        ++live_data;
        ++live_per_flow[p->flow.key()];
    }
    const std::uint64_t accounted =
        counters_.delivered + counters_.dropped_data_total() + live_data;
    if (counters_.generated != accounted) {
        throw std::logic_error("packet conservation violated: generated=" +
                               std::to_string(counters_.generated) +
                               " accounted=" + std::to_string(accounted));
    }
    if (also_per_flow) {
        for (const auto& [key, fs] : flow_stats_) {
            const std::uint64_t live = live_per_flow.count(key) ? live_per_flow.at(key) : 0;
            if (fs.generated != fs.delivered + fs.dropped + live) {
                throw std::logic_error("per-flow conservation violated for flow key " +
                                       std::to_string(key));
            }
        }
    }
    return live_data;
}

} // namespace sgsim
