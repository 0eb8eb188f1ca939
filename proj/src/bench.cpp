#include "sgsim/bench.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "sgsim/network.hpp"
#include "sgsim/queueing.hpp"
#include "sgsim/traffic.hpp"

namespace sgsim {

void SweepConfig::validate() const {
    if (switch_counts.empty()) throw std::invalid_argument("sweep: switch_counts empty");
    int prev = 0;
    for (int n : switch_counts) {
        if (n < 3 || n > 192) throw std::invalid_argument("sweep: switch counts must lie in [3, 192]");
        if (n <= prev) throw std::invalid_argument("sweep: switch counts must be strictly increasing");
        prev = n;
    }
    if (!(duration_s > skip_s) || skip_s < 0.0) {
        throw std::invalid_argument("sweep: need duration > skip >= 0");
    }
}

namespace {

// One emulated switch driving packet-ins at a fixed rate and counting the
// FlowMod responses it gets back inside [count_from, count_until).
class SynthSwitch : public EventTarget {
public:
    SynthSwitch(Engine& engine, Controller& master, int id, double iat_us, double offset_us,
                SimTime stop, double leg_delay_us, SimTime count_from, SimTime count_until)
        : engine_(engine),
          master_(master),
          id_(id),
          iat_us_(iat_us),
          offset_us_(offset_us),
          stop_(stop),
          leg_delay_us_(leg_delay_us),
          count_from_(count_from),
          count_until_(count_until) {}

    void start() {
        const SimTime first = emission_time(0);
        if (first < stop_) engine_.schedule(first, this, kSend, 0);
    }

    void on_event(const EventContext& ctx) override {
        if (ctx.code == kSend) {
            Packet* pin = new Packet;
            pin->kind = PacketKind::PacketIn;
            pin->flow = FlowKey{0, 0, static_cast<std::uint32_t>(id_)};
            pin->size_bytes = 128;
            pin->created_at = ctx.now;
            pin->origin_switch = id_;
            pin->synthetic = true;
            engine_.schedule(ctx.now + ticks_from_us(leg_delay_us_), &master_, 1,
                             reinterpret_cast<std::uint64_t>(pin));
            const SimTime next = emission_time(ctx.a + 1);
            if (next < stop_) engine_.schedule(next, this, kSend, ctx.a + 1);
        } else if (ctx.code == kResponse) {
            if (ctx.now >= count_from_ && ctx.now < count_until_) ++responses_;
        }
    }

    std::uint64_t responses() const { return responses_; }

    static constexpr std::uint32_t kSend = 1;
    static constexpr std::uint32_t kResponse = 2;

private:
    SimTime emission_time(std::uint64_t i) const {
        return ticks_from_us(offset_us_ + static_cast<double>(i) * iat_us_);
    }

    Engine& engine_;
    Controller& master_;
    int id_;
    double iat_us_;
    double offset_us_;
    SimTime stop_;
    double leg_delay_us_;
    SimTime count_from_;
    SimTime count_until_;
    std::uint64_t responses_ = 0;
};

} // namespace

SweepResult run_sweep(const SweepConfig& cfg, const ClusterConfig& cluster, ClusterMode mode) {
    cfg.validate();
    ClusterConfig cc = cluster;
    cc.mode = mode;

    SweepResult result;
    result.mode = mode;

    for (int n : cfg.switch_counts) {
        Engine engine;
        const int n_ctrl = cc.controller_count();
        std::vector<std::unique_ptr<Controller>> controllers;
        std::vector<int> ups;
        for (int c = 0; c < n_ctrl; ++c) {
            controllers.push_back(
                std::make_unique<Controller>(engine, c, cc.params(), cc.inbox_capacity));
            controllers[c]->set_free_hook([](Packet* p) { delete p; });
            ups.push_back(c);
        }
        const std::vector<int> master_of = assign_mastership(n, ups);
        std::vector<int> owned(n_ctrl, 0);
        for (int m : master_of) ++owned[m];
        double oracle = 0.0;
        for (int c = 0; c < n_ctrl; ++c) {
            controllers[c]->set_owned(owned[c]);
            oracle += controller_capacity_per_s(cc.params(), owned[c]);
        }

        const double rate_per_switch = cfg.per_switch_rate_per_s > 0.0
                                           ? cfg.per_switch_rate_per_s
                                           : 1.5 * oracle / n;
        const double iat_us = 1e6 / rate_per_switch;
        const double leg_us = cc.control_link_prop_us +
                              queueing::transmission_time_us(128, cc.control_link_bandwidth_bps);

        std::vector<std::unique_ptr<SynthSwitch>> drivers;
        const SimTime stop = ticks_from_seconds(cfg.duration_s);
        const SimTime count_from = ticks_from_seconds(cfg.skip_s);
        for (int d = 0; d < n; ++d) {
            const double offset_us = iat_us * static_cast<double>(d) / static_cast<double>(n);
            drivers.push_back(std::make_unique<SynthSwitch>(
                engine, *controllers[master_of[d]], d, iat_us, offset_us, stop, leg_us,
                count_from, stop));
        }
        for (int c = 0; c < n_ctrl; ++c) {
            controllers[c]->set_process_hook([&engine, &drivers, leg_us](Controller&, Packet* pin) {
                engine.schedule(engine.now() + ticks_from_us(leg_us),
                                drivers[pin->origin_switch].get(), SynthSwitch::kResponse);
            });
        }
        for (auto& d : drivers) d->start();
        // run past the horizon so in-flight control messages land and get freed
        engine.run_until(stop + ticks_from_us(4.0 * leg_us));

        std::uint64_t responses = 0;
        for (auto& d : drivers) responses += d->responses();
        SweepPoint point;
        point.switches = n;
        point.offered_per_s = rate_per_switch * n;
        point.responses_per_s =
            static_cast<double>(responses) / (cfg.duration_s - cfg.skip_s);
        point.oracle_capacity_per_s = oracle;
        result.points.push_back(point);
        for (auto& c : controllers) c->abandon_inbox();
    }
    return result;
}

void PingPongConfig::validate() const {
    if (count < 1) throw std::invalid_argument("pingpong: count must be >= 1");
    if (payload_bytes == 0) throw std::invalid_argument("pingpong: payload must be > 0");
    if (node_a != 0 && node_a == node_b) {
        throw std::invalid_argument("pingpong: endpoints must be distinct");
    }
}

double PingPongResult::mean_rtt_us() const {
    if (rtts_us.empty()) return 0.0;
    return std::accumulate(rtts_us.begin(), rtts_us.end(), 0.0) /
           static_cast<double>(rtts_us.size());
}

double PingPongResult::mean_one_way_us() const { return mean_rtt_us() / 2.0; }

namespace {

// Sequential echo exchange: the next ping leaves only after the previous
// pong came back. Warm mode sends one unmeasured priming exchange first.
class PingSession {
public:
    PingSession(Network& net, const PingPongConfig& cfg, int a, int b)
        : net_(net), cfg_(cfg), a_(a), b_(b), priming_(cfg.warm) {
        timer_.session = this;
        net_.host(b_).set_receive_hook([this](const Packet& p) { at_b(p); });
        net_.host(a_).set_receive_hook([this](const Packet& p) { at_a(p); });
    }

    void run() {
        send_ping();
        Engine& engine = net_.engine();
        while (!done_) {
            if (!engine.has_pending()) {
                throw std::runtime_error("pingpong: exchange stalled (echo lost)");
            }
            engine.run_until(engine.now() + ticks_from_seconds(1.0));
        }
    }

    const std::vector<double>& rtts() const { return rtts_; }

private:
    std::uint32_t ping_cls() const {
        return cfg_.warm ? kClassPingBase : kClassPingBase + static_cast<std::uint32_t>(seq_);
    }

    void send_ping() {
        Packet* ping = net_.make_packet(
            PacketKind::Ping,
            FlowKey{static_cast<std::uint16_t>(a_), static_cast<std::uint16_t>(b_), ping_cls()},
            cfg_.payload_bytes);
        net_.host_send(a_, ping);
    }

    void at_b(const Packet& p) {
        if (p.kind != PacketKind::Ping) return; // acks terminate here
        Packet* pong = net_.make_packet(
            PacketKind::Pong,
            FlowKey{static_cast<std::uint16_t>(b_), static_cast<std::uint16_t>(a_),
                    p.flow.cls + 0x10000000},
            cfg_.payload_bytes);
        pong->echo_of_created = p.created_at;
        net_.host_send(b_, pong);
    }

    void at_a(const Packet& p) {
        if (p.kind != PacketKind::Pong) return;
        const SimTime now = net_.engine().now();
        if (priming_) {
            priming_ = false;
        } else {
            rtts_.push_back(us_from_ticks(now - p.echo_of_created));
            ++seq_;
        }
        if (cfg_.acknowledged) {
            Packet* ack = net_.make_packet(
                PacketKind::Ack,
                FlowKey{static_cast<std::uint16_t>(a_), static_cast<std::uint16_t>(b_),
                        p.flow.cls + 0x10000000},
                64);
            net_.host_send(a_, ack);
        }
        if (static_cast<int>(rtts_.size()) >= cfg_.count) {
            done_ = true;
            return;
        }
        net_.engine().schedule(now + ticks_from_us(cfg_.gap_us), &timer_, 1);
    }

    struct Timer : EventTarget {
        PingSession* session = nullptr;
        void on_event(const EventContext&) override { session->send_ping(); }
    };

    Network& net_;
    PingPongConfig cfg_;
    int a_;
    int b_;
    int seq_ = 0;
    bool priming_;
    bool done_ = false;
    std::vector<double> rtts_;
    Timer timer_;
};

} // namespace

PingPongResult run_pingpong(const Topology& topo, const ClusterConfig& cluster,
                            ClusterMode mode, const DataplaneParams& dataplane,
                            const PingPongConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    int a = cfg.node_a, b = cfg.node_b;
    if (a == 0 || b == 0) {
        auto [fa, fb, hops] = topo.farthest_pair();
        (void)hops;
        a = fa.index;
        b = fb.index;
    }
    if (!topo.has_node({NodeKind::Host, a}) || !topo.has_node({NodeKind::Host, b})) {
        throw std::invalid_argument("pingpong: endpoint host missing from topology");
    }
    topo.shortest_path({NodeKind::Host, a}, {NodeKind::Host, b}); // throws if unreachable

    ClusterConfig cc = cluster;
    cc.mode = mode;
    DataplaneParams dp = dataplane;
    if (cfg.warm) {
        // warm = persistent rules once learned, bare data path thereafter
        dp.flow_hard_timeout_s = 0.0;
        dp.flow_idle_timeout_s = 0.0;
    }

    Engine engine;
    Network net(engine, topo, cc, dp, seed);
    PingSession session(net, cfg, a, b);
    session.run();
    net.audit_conservation(true);

    PingPongResult result;
    result.mode = mode;
    result.acknowledged = cfg.acknowledged;
    result.node_a = a;
    result.node_b = b;
    result.count = cfg.count;
    result.payload_bytes = cfg.payload_bytes;
    result.warm = cfg.warm;
    result.rtts_us = session.rtts();
    return result;
}

double latency_reduction_pct(double mean_a, double mean_b) {
    if (!(mean_b > 0.0)) throw std::invalid_argument("compare_latency: zero baseline mean");
    return (1.0 - mean_a / mean_b) * 100.0;
}

double compare_latency_reduction_pct(const PingPongResult& a, const PingPongResult& b) {
    if (a.node_a != b.node_a || a.node_b != b.node_b || a.count != b.count ||
        a.payload_bytes != b.payload_bytes || a.acknowledged != b.acknowledged ||
        a.warm != b.warm) {
        throw std::invalid_argument("compare_latency: configurations do not match");
    }
    return latency_reduction_pct(a.mean_one_way_us(), b.mean_one_way_us());
}

} // namespace sgsim
