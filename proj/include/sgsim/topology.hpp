#ifndef SGSIM_TOPOLOGY_HPP
#define SGSIM_TOPOLOGY_HPP

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

namespace sgsim {

enum class NodeKind : std::uint8_t { Host = 0, Switch = 1, Controller = 2 };

const char* to_string(NodeKind kind);

struct NodeId {
    NodeKind kind = NodeKind::Host;
    int index = 0;

    auto operator<=>(const NodeId&) const = default;
    std::string str() const;
};

struct Link {
    NodeId a;
    NodeId b;
    double bandwidth_bps = 0.0;
    double prop_delay_us = 0.0;
    double length_km = 0.0;
};

class TopologyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Immutable communication graph over hosts and switches. Controller
// attachment is handled by the control plane through dedicated control links
// that are not part of this graph, so shortest paths never route data through
// a controller.
class Topology {
public:
    // Default smart-grid build: 118 hosts round-robin over 45 switches,
    // switches on a ring with express chords every 5 switches. Every link's
    // propagation delay is drawn from N(mean_pd, stddev^2), clamped at 1 us.
    // Host labels are permuted deterministically so that hosts 1 and 112 are
    // the canonical maximum-hop measurement pair.
    static Topology build_ieee118(std::uint64_t seed, double mean_pd_us = 203.307,
                                  double pd_noise_stddev_us = 20.33,
                                  double bandwidth_bps = 20e6);

    // Loads a topology-config document. Schema:
    //   propagation_speed_km_s: number (optional, default 200000)
    //   nodes: [{id, kind: "host"|"switch"}]
    //   links: [{a, b, bandwidth_bps, length_km | prop_delay_us}]
    // Node references in links are "h<index>" / "s<index>". Exactly one of
    // length_km / prop_delay_us per link. Unknown keys are rejected.
    static Topology load(const nlohmann::json& doc);
    static Topology load_file(const std::string& path);

    int host_count() const { return host_count_; }
    int switch_count() const { return switch_count_; }
    double propagation_speed_km_s() const { return propagation_speed_km_s_; }

    const std::vector<Link>& links() const { return links_; }
    bool has_node(NodeId n) const;

    // Link index joining a and b, or -1.
    int link_between(NodeId a, NodeId b) const;
    const Link& link(int idx) const { return links_[idx]; }

    // Neighbors sorted ascending by (kind, index).
    const std::vector<NodeId>& neighbors(NodeId n) const;

    // Switch a host hangs off.
    NodeId access_switch(int host_index) const;

    // Minimal-hop path a..b inclusive; ties broken by smallest next-node
    // index at each step. Throws TopologyError for an unreachable pair.
    std::vector<NodeId> shortest_path(NodeId a, NodeId b) const;

    // Host pair maximizing hop count, min-index-first on ties; returns
    // (a, b, hops).
    std::tuple<NodeId, NodeId, int> farthest_pair() const;

    nlohmann::json to_json() const;

private:
    int node_ordinal(NodeId n) const;

    int host_count_ = 0;
    int switch_count_ = 0;
    double propagation_speed_km_s_ = 200000.0;
    std::vector<Link> links_;
    // ordinal = host index - 1 for hosts, host_count + switch index - 1 for
    // switches
    std::vector<std::vector<NodeId>> adjacency_;
    std::vector<std::vector<int>> adjacency_links_;
    std::vector<std::vector<int>> ord_adj_;

    void finalize();
    friend class TopologyBuilder;
};

} // namespace sgsim

#endif
