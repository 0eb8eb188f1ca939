#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "sgsim/controlplane.hpp"
#include "sgsim/network.hpp"
#include "sgsim/traffic.hpp"

using namespace sgsim;

namespace {

std::map<int, int> sizes(const std::vector<int>& master) {
    std::map<int, int> out;
    for (int m : master) ++out[m];
    return out;
}

ClusterConfig flat3() {
    ClusterConfig cc;
    cc.mode = ClusterMode::DistributedFlat;
    return cc;
}

} // namespace

TEST_CASE("mastership partitions 45 switches as 15/15/15") {
    auto m = assign_mastership(45, {0, 1, 2});
    auto s = sizes(m);
    CHECK(s[0] == 15);
    CHECK(s[1] == 15);
    CHECK(s[2] == 15);
    // contiguous ranges in ascending controller order
    CHECK(m.front() == 0);
    CHECK(m[15] == 1);
    CHECK(m[30] == 2);
    for (std::size_t i = 1; i < m.size(); ++i) CHECK(m[i] >= m[i - 1]);
}

TEST_CASE("centralized mastership gives every switch to the one controller") {
    auto m = assign_mastership(45, {0});
    for (int x : m) CHECK(x == 0);
}

TEST_CASE("remainders split 44 switches as 15/15/14") {
    auto s = sizes(assign_mastership(44, {0, 1, 2}));
    CHECK(s[0] == 15);
    CHECK(s[1] == 15);
    CHECK(s[2] == 14);
}

TEST_CASE("no up controllers leaves every switch unmastered") {
    auto m = assign_mastership(5, {});
    for (int x : m) CHECK(x == -1);
}

TEST_CASE("controller capacity formula") {
    CHECK(controller_capacity_per_s({10.0, 0.0}, 45) == doctest::Approx(100'000.0));
    CHECK(controller_capacity_per_s({10.0, 0.02}, 45) == doctest::Approx(52'631.6).epsilon(1e-5));
    // strictly decreasing in owned switches when alpha > 0
    double prev = 1e18;
    for (int n = 1; n <= 200; ++n) {
        const double cap = controller_capacity_per_s({10.0, 0.02}, n);
        CHECK(cap < prev);
        prev = cap;
    }
}

TEST_CASE("aggregate flat capacity beats centralized for alpha > 0") {
    // equal parameters both sides, 45 switches: 3 controllers each owning 15
    for (double alpha : {0.01, 0.02, 0.05, 0.2}) {
        const ControllerParams p{10.0, alpha};
        const double flat = 3.0 * controller_capacity_per_s(p, 15);
        const double central = controller_capacity_per_s(p, 45);
        CHECK(flat > central);
    }
    // and with more than one controller it wins even at alpha == 0
    const ControllerParams p0{10.0, 0.0};
    CHECK(3.0 * controller_capacity_per_s(p0, 15) > controller_capacity_per_s(p0, 45));
}

TEST_CASE("failover remasters within the detection timeout") {
    Topology topo = Topology::build_ieee118(42);
    Engine e;
    ClusterConfig cc = flat3();
    cc.failure_detection_timeout_s = 0.5;
    Network net(e, topo, cc, DataplaneParams{}, 42);

    auto s0 = sizes(net.mastership());
    CHECK(s0[0] == 15);
    CHECK(s0[1] == 15);
    CHECK(s0[2] == 15);
    const std::uint64_t v0 = net.mastership_version();

    net.fail_controller(1, ticks_from_seconds(15.0));
    e.run_until(ticks_from_seconds(15.4));
    CHECK(sizes(net.mastership()) == s0); // detection window still open
    e.run_until(ticks_from_seconds(15.6));
    auto s1 = sizes(net.mastership());
    CHECK(s1[0] == 23);
    CHECK(s1[2] == 22);
    CHECK(s1.count(1) == 0);
    CHECK(net.mastership_version() > v0);
    CHECK(net.last_remaster_at() == ticks_from_seconds(15.5));

    // recovery rebalances back
    net.recover_controller(1, ticks_from_seconds(20.0));
    e.run_until(ticks_from_seconds(20.6));
    auto s2 = sizes(net.mastership());
    CHECK(s2[0] == 15);
    CHECK(s2[1] == 15);
    CHECK(s2[2] == 15);
}

TEST_CASE("every switch keeps exactly one up master outside detection windows") {
    Topology topo = Topology::build_ieee118(42);
    Engine e;
    Network net(e, topo, flat3(), DataplaneParams{}, 42);
    net.fail_controller(2, ticks_from_seconds(1.0));
    net.recover_controller(2, ticks_from_seconds(3.0));
    for (double t : {0.5, 2.0, 4.0}) {
        e.run_until(ticks_from_seconds(t));
        if (t == 2.0) {
            // after the failure's detection window
            CHECK(net.last_remaster_at() == ticks_from_seconds(1.5));
        }
        for (int sw = 0; sw < topo.switch_count(); ++sw) {
            const int m = net.mastership()[sw];
            REQUIRE(m >= 0);
            CHECK(net.controller(m).up());
        }
    }
}

TEST_CASE("failing the last controller records a total outage and drops packet-ins") {
    Engine e;
    Topology topo = Topology::build_ieee118(42);
    ClusterConfig cc;
    cc.mode = ClusterMode::Centralized;
    Network net(e, topo, cc, DataplaneParams{}, 42);
    net.fail_controller(0, ticks_from_seconds(0.1));
    e.run_until(ticks_from_seconds(1.0));
    CHECK(net.counters().total_outages == 1);

    struct One : EventTarget {
        Network* net;
        void on_event(const EventContext&) override {
            net->host_send(1, net->make_packet(PacketKind::Data, {1, 2, 4}, 100));
        }
    } one{};
    one.net = &net;
    e.schedule(ticks_from_seconds(1.0), &one);
    e.run_until(ticks_from_seconds(2.0));
    CHECK(net.counters().dropped_no_master == 1);
    CHECK(net.host(2).rx_packets() == 0);
}

TEST_CASE("a packet-in from an owned switch installs rules along the path") {
    Topology topo = Topology::build_ieee118(42);
    Engine e;
    Network net(e, topo, flat3(), DataplaneParams{}, 42);
    struct One : EventTarget {
        Network* net;
        void on_event(const EventContext&) override {
            net->host_send(1, net->make_packet(PacketKind::Data, {1, 112, 6}, 100));
        }
    } one{};
    one.net = &net;
    e.schedule(0, &one);
    e.run_until(ticks_from_seconds(1.0));

    auto path = topo.shortest_path({NodeKind::Host, 1}, {NodeKind::Host, 112});
    int switches_on_path = 0;
    for (const NodeId& n : path) {
        if (n.kind != NodeKind::Switch) continue;
        ++switches_on_path;
        CHECK(net.switch_node(n.index).table().match({1, 112, 6}) != nullptr);
    }
    CHECK(net.counters().flowmods_sent == static_cast<std::uint64_t>(switches_on_path));
    CHECK(net.host(112).rx_packets() == 1);
}

TEST_CASE("cross-cluster flows install at switches owned by other controllers") {
    Topology topo = Topology::build_ieee118(42);
    Engine e;
    Network net(e, topo, flat3(), DataplaneParams{}, 42);
    // find a host pair whose path spans at least two mastership ranges
    int src = 1, dst = -1;
    for (int b = 2; b <= 118 && dst < 0; ++b) {
        auto path = topo.shortest_path({NodeKind::Host, 1}, {NodeKind::Host, b});
        std::set<int> masters;
        for (const NodeId& n : path) {
            if (n.kind == NodeKind::Switch) masters.insert(net.mastership()[n.index - 1]);
        }
        if (masters.size() >= 2) dst = b;
    }
    REQUIRE(dst > 0);
    struct One : EventTarget {
        Network* net;
        int src, dst;
        void on_event(const EventContext&) override {
            net->host_send(src, net->make_packet(
                                    PacketKind::Data,
                                    {static_cast<std::uint16_t>(src),
                                     static_cast<std::uint16_t>(dst), 6},
                                    100));
        }
    } one{};
    one.net = &net;
    one.src = src;
    one.dst = dst;
    e.schedule(0, &one);
    e.run_until(ticks_from_seconds(1.0));
    auto path = topo.shortest_path({NodeKind::Host, src}, {NodeKind::Host, dst});
    for (const NodeId& n : path) {
        if (n.kind != NodeKind::Switch) continue;
        CHECK(net.switch_node(n.index).table().match(
                  {static_cast<std::uint16_t>(src), static_cast<std::uint16_t>(dst), 6}) !=
              nullptr);
    }
    // only the packet-in owner processed work
    int busy = 0;
    for (int c = 0; c < 3; ++c) busy += net.controller(c).processed() > 0 ? 1 : 0;
    CHECK(busy == 1);
    CHECK(net.host(dst).rx_packets() == 1);
}

TEST_CASE("inbox overflow drops packet-ins") {
    Engine e;
    Topology topo = Topology::build_ieee118(42);
    ClusterConfig cc;
    cc.mode = ClusterMode::Centralized;
    cc.inbox_capacity = 3;
    cc.centralized.s0_us = 100'000.0; // each packet-in takes a long while
    Network net(e, topo, cc, DataplaneParams{}, 42);
    struct Burst : EventTarget {
        Network* net;
        void on_event(const EventContext&) override {
            for (int i = 0; i < 10; ++i) {
                net->host_send(1, net->make_packet(
                                      PacketKind::Data,
                                      {1, 2, 100 + static_cast<std::uint32_t>(i)}, 64));
            }
        }
    } burst{};
    burst.net = &net;
    e.schedule(0, &burst);
    e.run_until(ticks_from_seconds(0.2));
    CHECK(net.controller(0).dropped_inbox() > 0);
    CHECK(net.controller(0).received() <= 4); // capacity plus the one in service
}

TEST_CASE("peer views converge after quiescence") {
    Topology topo = Topology::build_ieee118(42);
    Engine e;
    ClusterConfig cc = flat3();
    cc.sync_delay_us = 1000.0;
    Network net(e, topo, cc, DataplaneParams{}, 42);
    struct Burst : EventTarget {
        Network* net;
        void on_event(const EventContext&) override {
            for (int i = 0; i < 5; ++i) {
                net->host_send(3 * i + 1, net->make_packet(
                                              PacketKind::Data,
                                              {static_cast<std::uint16_t>(3 * i + 1),
                                               static_cast<std::uint16_t>(3 * i + 2),
                                               50 + static_cast<std::uint32_t>(i)},
                                              64));
            }
        }
    } burst{};
    burst.net = &net;
    e.schedule(0, &burst);
    e.run_until(ticks_from_seconds(5.0)); // quiescent for far longer than sync_delay
    CHECK(net.controller(0).view().size() > 0);
    CHECK(net.controller(0).view() == net.controller(1).view());
    CHECK(net.controller(1).view() == net.controller(2).view());
}

TEST_CASE("no packet-in is routed to a down controller after the detection timeout") {
    Topology topo = Topology::build_ieee118(42);
    Engine e;
    ClusterConfig cc = flat3();
    Network net(e, topo, cc, DataplaneParams{}, 42);

    // steady stream of fresh flows through switches mastered by controller 0
    TrafficSpec spec;
    spec.pattern = TrafficPattern::ConstantRate;
    spec.src = 1;
    spec.dst = 2;
    spec.start = 0;
    spec.stop = ticks_from_seconds(10.0);
    spec.rate_bps = 1e6;
    spec.packet_size_bytes = 1000;
    spec.traffic_class = 1000;
    spec.per_packet_flow = true; // every packet is a fresh flow
    TrafficGenerator gen(net, spec);
    gen.start();

    net.fail_controller(0, ticks_from_seconds(5.0));
    e.run_until(ticks_from_seconds(10.0));

    const SimTime remaster_done = ticks_from_seconds(5.0) +
                                  ticks_from_seconds(cc.failure_detection_timeout_s);
    CHECK(net.last_remaster_at() == remaster_done);
    CHECK(net.last_routed_at(0) <= remaster_done);
    CHECK(net.controller(0).lost_on_death() + net.controller(0).received_while_down() > 0);
}
