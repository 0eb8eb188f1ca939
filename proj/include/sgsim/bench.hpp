#ifndef SGSIM_BENCH_HPP
#define SGSIM_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sgsim/controlplane.hpp"
#include "sgsim/dataplane.hpp"
#include "sgsim/topology.hpp"

namespace sgsim {

// Controller-throughput scalability sweep: n synthetic switches offer
// packet-ins, the cluster answers, sustained responses/second is recorded.
struct SweepConfig {
    std::vector<int> switch_counts{3, 6, 12, 24, 48, 96, 192};
    // Packet-ins per second per switch; <= 0 means saturate (offer 1.5x the
    // cluster capacity, always-full-pipe semantics).
    double per_switch_rate_per_s = 0.0;
    double duration_s = 1.0;
    double skip_s = 0.2;

    void validate() const;
};

struct SweepPoint {
    int switches = 0;
    double offered_per_s = 0.0;
    double responses_per_s = 0.0;
    double oracle_capacity_per_s = 0.0;
};

struct SweepResult {
    ClusterMode mode;
    std::vector<SweepPoint> points;
};

SweepResult run_sweep(const SweepConfig& cfg, const ClusterConfig& cluster, ClusterMode mode);

// Ping-pong latency measurement between two hosts. Cold mode uses a fresh
// flow per exchange so every ping pays the controller path, which is where
// the two control planes differ; warm mode pre-establishes rules and measures
// the bare data path.
struct PingPongConfig {
    int node_a = 0; // 0 = resolve via farthest_pair
    int node_b = 0;
    int count = 1000;
    std::uint32_t payload_bytes = 64;
    bool warm = false;
    bool acknowledged = false; // ack-per-pong transport
    double gap_us = 100.0;     // idle gap between an echo and the next ping

    void validate() const;
};

struct PingPongResult {
    ClusterMode mode;
    bool acknowledged = false;
    int node_a = 0;
    int node_b = 0;
    int count = 0;
    std::uint32_t payload_bytes = 0;
    bool warm = false;
    std::vector<double> rtts_us;

    double mean_rtt_us() const;
    double mean_one_way_us() const;
};

PingPongResult run_pingpong(const Topology& topo, const ClusterConfig& cluster,
                            ClusterMode mode, const DataplaneParams& dataplane,
                            const PingPongConfig& cfg, std::uint64_t seed);

// Mean-latency reduction of a versus b: (1 - mean_a / mean_b) * 100.
// Throws std::invalid_argument when the two results measure different setups.
double compare_latency_reduction_pct(const PingPongResult& a, const PingPongResult& b);
double latency_reduction_pct(double mean_a, double mean_b);

} // namespace sgsim

#endif
