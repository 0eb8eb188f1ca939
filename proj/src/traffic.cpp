#include "sgsim/traffic.hpp"

#include <stdexcept>

namespace sgsim {

namespace {
constexpr std::uint32_t kEmit = 1;
} // namespace

void TrafficSpec::validate() const {
    if (start >= stop) throw std::invalid_argument("traffic: start must precede stop");
    if (src == dst) throw std::invalid_argument("traffic: src and dst must differ");
    if (packet_size_bytes == 0) throw std::invalid_argument("traffic: packet size must be > 0");
    switch (pattern) {
        case TrafficPattern::Poisson:
            if (!(poisson_rate_per_s > 0.0)) throw std::invalid_argument("traffic: poisson rate must be > 0");
            break;
        case TrafficPattern::PeriodicGroup:
            if (group_size <= 0 || !(group_period_s > 0.0)) {
                throw std::invalid_argument("traffic: bad periodic group parameters");
            }
            break;
        case TrafficPattern::ConstantRate:
            if (!(rate_bps > 0.0)) throw std::invalid_argument("traffic: rate must be > 0");
            break;
        case TrafficPattern::Flood:
            if (flood_count == 0 || !(flood_iat_us > 0.0)) {
                throw std::invalid_argument("traffic: bad flood parameters");
            }
            break;
    }
}

TrafficGenerator::TrafficGenerator(Network& net, TrafficSpec spec, RandomStream* stream)
    : net_(net), spec_(spec), stream_(stream) {
    spec_.validate();
    if (spec_.pattern == TrafficPattern::Poisson && !stream_) {
        throw std::invalid_argument("Poisson traffic needs a RandomStream");
    }
}

SimTime TrafficGenerator::emission_time(std::uint64_t index) const {
    switch (spec_.pattern) {
        case TrafficPattern::ConstantRate:
            return spec_.start + ticks_from_us(static_cast<double>(index) * spec_.constant_rate_iat_us());
        case TrafficPattern::Flood:
            return spec_.start + ticks_from_us(static_cast<double>(index) * spec_.flood_iat_us);
        case TrafficPattern::PeriodicGroup:
            return spec_.start + ticks_from_seconds(static_cast<double>(index) * spec_.group_period_s);
        default:
            return 0;
    }
}

void TrafficGenerator::start() {
    if (spec_.pattern == TrafficPattern::Poisson) {
        const SimTime first =
            spec_.start + ticks_from_seconds(stream_->exponential(spec_.poisson_rate_per_s));
        if (first < spec_.stop) net_.engine().schedule(first, this, kEmit, 0);
        return;
    }
    const SimTime first = emission_time(0);
    if (first < spec_.stop) net_.engine().schedule(first, this, kEmit, 0);
}

void TrafficGenerator::emit_one(std::uint64_t index) {
    FlowKey flow{static_cast<std::uint16_t>(spec_.src), static_cast<std::uint16_t>(spec_.dst),
                 spec_.per_packet_flow
                     ? spec_.traffic_class + static_cast<std::uint32_t>(index)
                     : spec_.traffic_class};
    Packet* p = net_.make_packet(PacketKind::Data, flow, spec_.packet_size_bytes);
    net_.host_send(spec_.src, p);
    ++emitted_;
}

void TrafficGenerator::on_event(const EventContext& ctx) {
    if (ctx.code != kEmit) return;
    const std::uint64_t index = ctx.a;
    switch (spec_.pattern) {
        case TrafficPattern::PeriodicGroup: {
            for (int i = 0; i < spec_.group_size; ++i) emit_one(index * spec_.group_size + i);
            const SimTime next = emission_time(index + 1);
            if (next < spec_.stop) net_.engine().schedule(next, this, kEmit, index + 1);
            break;
        }
        case TrafficPattern::Poisson: {
            emit_one(index);
            const SimTime next =
                ctx.now + ticks_from_seconds(stream_->exponential(spec_.poisson_rate_per_s));
            if (next < spec_.stop) net_.engine().schedule(next, this, kEmit, index + 1);
            break;
        }
        case TrafficPattern::ConstantRate: {
            emit_one(index);
            const SimTime next = emission_time(index + 1);
            if (next < spec_.stop) net_.engine().schedule(next, this, kEmit, index + 1);
            break;
        }
        case TrafficPattern::Flood: {
            emit_one(index);
            if (index + 1 < spec_.flood_count) {
                const SimTime next = emission_time(index + 1);
                if (next < spec_.stop) net_.engine().schedule(next, this, kEmit, index + 1);
            }
            break;
        }
    }
}

void DosScenarioConfig::validate(const Topology& topo) const {
    if (!(duration_s > 0.0)) throw std::invalid_argument("dos: duration must be > 0");
    if (!(attack_start_s < attack_stop_s) || attack_stop_s > duration_s || attack_start_s < 0.0) {
        throw std::invalid_argument("dos: attack window must sit inside [0, duration)");
    }
    if (attacker == victim) throw std::invalid_argument("dos: attacker must differ from victim");
    for (int h : {background_src, background_dst, attacker, victim}) {
        if (!topo.has_node({NodeKind::Host, h})) {
            throw std::invalid_argument("dos: host h" + std::to_string(h) + " not in topology");
        }
    }
    if (ack_every <= 0) throw std::invalid_argument("dos: ack_every must be > 0");
}

DosRepResult run_dos_rep(const Topology& topo, const ClusterConfig& cluster,
                         const DataplaneParams& dataplane, const DosScenarioConfig& cfg,
                         std::uint64_t seed, int rep) {
    cfg.validate(topo);

    Engine engine;
    Network net(engine, topo, cluster, dataplane, seed);

    // iPerf-like open-loop transfer with an ack back every ack_every packets,
    // enough to sample RTT without congestion control.
    TrafficSpec bg;
    bg.pattern = TrafficPattern::ConstantRate;
    bg.src = cfg.background_src;
    bg.dst = cfg.background_dst;
    bg.start = 0;
    bg.stop = ticks_from_seconds(cfg.duration_s);
    bg.traffic_class = kClassBackground;
    bg.packet_size_bytes = cfg.background_packet_bytes;
    bg.rate_bps = cfg.background_bps;
    TrafficGenerator bg_gen(net, bg);

    TrafficSpec flood;
    flood.pattern = TrafficPattern::Flood;
    flood.src = cfg.attacker;
    flood.dst = cfg.victim;
    flood.start = ticks_from_seconds(cfg.attack_start_s);
    flood.stop = ticks_from_seconds(cfg.attack_stop_s);
    flood.traffic_class = kClassFloodBase;
    flood.packet_size_bytes = cfg.flood_packet_bytes;
    flood.flood_count = cfg.flood_count;
    flood.flood_iat_us = cfg.flood_iat_us;
    flood.per_packet_flow = true;
    TrafficGenerator flood_gen(net, flood);

    WindowAccumulator acc(cfg.window_s, cfg.duration_s);
    DosRepResult result;
    result.mode = to_string(cluster.mode);
    result.rep = rep;
    result.seed = seed;

    net.set_delivery_hook([&](const Packet& p, SimTime now) {
        if (p.flow.cls == kClassBackground && p.flow.dst == cfg.background_dst) {
            acc.add(now, p.size_bytes);
            result.delivered_background_bits += static_cast<std::int64_t>(p.size_bytes) * 8;
        }
    });

    int data_since_ack = 0;
    net.host(cfg.background_dst)
        .set_receive_hook([&](const Packet& p) {
            if (p.flow.cls != kClassBackground) return;
            if (++data_since_ack >= cfg.ack_every) {
                data_since_ack = 0;
                Packet* ack = net.make_packet(
                    PacketKind::Ack,
                    FlowKey{static_cast<std::uint16_t>(cfg.background_dst),
                            static_cast<std::uint16_t>(cfg.background_src), kClassBackgroundAck},
                    64);
                ack->echo_of_created = p.created_at;
                net.host_send(cfg.background_dst, ack);
            }
        });
    net.host(cfg.background_src)
        .set_receive_hook([&](const Packet& p) {
            if (p.flow.cls == kClassBackgroundAck && p.echo_of_created >= 0) {
                result.ack_rtts_us.push_back(us_from_ticks(engine.now() - p.echo_of_created));
            }
        });

    bg_gen.start();
    flood_gen.start();

    if (cfg.fail_one_controller) {
        net.fail_controller(cfg.fail_controller_id, ticks_from_seconds(cfg.fail_at_s));
    }

    // victim access-port drop samples at 100 ms cadence
    const NodeId victim_sw = topo.access_switch(cfg.victim);
    SwitchNode& vs = net.switch_node(victim_sw.index);
    const int victim_port = vs.port_toward({NodeKind::Host, cfg.victim});
    PortMonitor monitor(engine, vs.port(victim_port), ticks_from_seconds(0.1),
                        ticks_from_seconds(cfg.duration_s));

    engine.run_until(ticks_from_seconds(cfg.duration_s));

    result.series = acc.finish(result.mode, rep);
    result.phase = phase_summary(result.series, cfg.attack_start_s, cfg.attack_stop_s, cfg.warmup_s);
    result.counters = net.counters();
    for (int c = 0; c < net.controller_count(); ++c) {
        const Controller& ctl = net.controller(c);
        result.controllers.push_back(ControllerSnapshot{
            ctl.id(), ctl.up(), ctl.received(), ctl.processed(), ctl.dropped_inbox(),
            ctl.received_while_down(), ctl.lost_on_death()});
    }
    for (const PortSample& s : monitor.series()) {
        result.victim_drop_series.emplace_back(s.at, s.drops);
    }
    result.victim_port_drops = vs.port(victim_port).drops();
    result.last_remaster_at = net.last_remaster_at();
    result.mastership_version = net.mastership_version();
    if (cfg.fail_one_controller) {
        result.last_routed_at_failed = net.last_routed_at(cfg.fail_controller_id);
    }

    net.audit_conservation(true);
    return result;
}

} // namespace sgsim
