#ifndef SGSIM_TRAFFIC_HPP
#define SGSIM_TRAFFIC_HPP

#include <cstdint>

#include "sgsim/metrics.hpp"
#include "sgsim/network.hpp"
#include "sgsim/rng.hpp"

namespace sgsim {

enum class TrafficPattern { Poisson, PeriodicGroup, ConstantRate, Flood };

// Flow-class ranges. Flood flows take one class per packet (the random-source
// flood signature), everything else keeps a single class.
constexpr std::uint32_t kClassBackground = 1;
constexpr std::uint32_t kClassBackgroundAck = 2;
constexpr std::uint32_t kClassTelemetry = 3;
constexpr std::uint32_t kClassPingBase = 0x40000000;
constexpr std::uint32_t kClassFloodBase = 0x80000000;

struct TrafficSpec {
    TrafficPattern pattern = TrafficPattern::ConstantRate;
    int src = 1;
    int dst = 2;
    SimTime start = 0;
    SimTime stop = 0;
    std::uint32_t traffic_class = kClassBackground;
    std::uint32_t packet_size_bytes = 1500;

    double poisson_rate_per_s = 1.0;       // Poisson
    int group_size = 4;                     // PeriodicGroup
    double group_period_s = 4.0;
    double rate_bps = 18e6;                 // ConstantRate
    std::uint64_t flood_count = 80000;      // Flood
    double flood_iat_us = 100.0;
    bool per_packet_flow = false;

    void validate() const; // throws std::invalid_argument
    double constant_rate_iat_us() const {
        return packet_size_bytes * 8.0 / rate_bps * 1e6;
    }
};

// Schedules packet emissions for one TrafficSpec on a Network. Emission
// times are generated lazily, one event ahead, so a long flood costs no
// upfront memory.
class TrafficGenerator : public EventTarget {
public:
    TrafficGenerator(Network& net, TrafficSpec spec, RandomStream* stream = nullptr);
    void start();
    void on_event(const EventContext& ctx) override;
    std::uint64_t emitted() const { return emitted_; }

private:
    void emit_one(std::uint64_t index);
    SimTime emission_time(std::uint64_t index) const; // deterministic patterns

    Network& net_;
    TrafficSpec spec_;
    RandomStream* stream_;
    std::uint64_t emitted_ = 0;
};

// The flood experiment: an iPerf-like constant-rate transfer that a flood
// tries to drown, with pre/during/post reporting.
struct DosScenarioConfig {
    double duration_s = 30.0;
    double attack_start_s = 10.0;
    double attack_stop_s = 20.0;
    double warmup_s = 5.0;
    double window_s = 1.0;

    int background_src = 1;
    int background_dst = 2;
    double background_bps = 18e6;
    std::uint32_t background_packet_bytes = 1500;
    int ack_every = 10;

    int attacker = 3;
    int victim = 2;
    std::uint64_t flood_count = 80000;
    double flood_iat_us = 100.0;
    std::uint32_t flood_packet_bytes = 160;

    bool fail_one_controller = false;
    int fail_controller_id = 0;
    double fail_at_s = 15.0;

    void validate(const Topology& topo) const;
};

DosRepResult run_dos_rep(const Topology& topo, const ClusterConfig& cluster,
                         const DataplaneParams& dataplane, const DosScenarioConfig& cfg,
                         std::uint64_t seed, int rep);

} // namespace sgsim

#endif
