#include "sgsim/topology.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <set>

#include "sgsim/queueing.hpp"
#include "sgsim/rng.hpp"

namespace sgsim {

const char* to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::Host: return "host";
        case NodeKind::Switch: return "switch";
        case NodeKind::Controller: return "controller";
    }
    return "?";
}

std::string NodeId::str() const {
    const char prefix = kind == NodeKind::Host ? 'h' : kind == NodeKind::Switch ? 's' : 'c';
    return prefix + std::to_string(index);
}

namespace {

constexpr int kHosts = 118;
constexpr int kSwitches = 45;
constexpr double kMinPropDelayUs = 1.0;

// Unit-hop BFS distances from src over an adjacency list.
std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int src) {
    std::vector<int> dist(adj.size(), -1);
    std::deque<int> q{src};
    dist[src] = 0;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int v : adj[u]) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    return dist;
}

} // namespace

class TopologyBuilder {
public:
    static Topology assemble(int hosts, int switches, double speed_km_s,
                             std::vector<Link> links) {
        Topology t;
        t.host_count_ = hosts;
        t.switch_count_ = switches;
        t.propagation_speed_km_s_ = speed_km_s;
        t.links_ = std::move(links);
        t.finalize();
        return t;
    }
};

void Topology::finalize() {
    const std::size_t n = static_cast<std::size_t>(host_count_) + switch_count_;
    adjacency_.assign(n, {});
    adjacency_links_.assign(n, {});
    for (std::size_t i = 0; i < links_.size(); ++i) {
        const Link& l = links_[i];
        adjacency_[node_ordinal(l.a)].push_back(l.b);
        adjacency_links_[node_ordinal(l.a)].push_back(static_cast<int>(i));
        adjacency_[node_ordinal(l.b)].push_back(l.a);
        adjacency_links_[node_ordinal(l.b)].push_back(static_cast<int>(i));
    }
    for (std::size_t i = 0; i < n; ++i) {
        // keep (neighbor, link) pairs aligned while sorting by neighbor id
        std::vector<std::pair<NodeId, int>> pairs;
        pairs.reserve(adjacency_[i].size());
        for (std::size_t k = 0; k < adjacency_[i].size(); ++k) {
            pairs.emplace_back(adjacency_[i][k], adjacency_links_[i][k]);
        }
        std::sort(pairs.begin(), pairs.end());
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            adjacency_[i][k] = pairs[k].first;
            adjacency_links_[i][k] = pairs[k].second;
        }
    }
    ord_adj_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        ord_adj_[i].reserve(adjacency_[i].size());
        for (NodeId nb : adjacency_[i]) ord_adj_[i].push_back(node_ordinal(nb));
    }
}

int Topology::node_ordinal(NodeId n) const {
    if (n.kind == NodeKind::Host) return n.index - 1;
    if (n.kind == NodeKind::Switch) return host_count_ + n.index - 1;
    throw TopologyError("controller nodes are not part of the data-plane graph");
}

bool Topology::has_node(NodeId n) const {
    if (n.kind == NodeKind::Host) return n.index >= 1 && n.index <= host_count_;
    if (n.kind == NodeKind::Switch) return n.index >= 1 && n.index <= switch_count_;
    return false;
}

int Topology::link_between(NodeId a, NodeId b) const {
    const auto& nbrs = adjacency_[node_ordinal(a)];
    const auto& lnks = adjacency_links_[node_ordinal(a)];
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
        if (nbrs[i] == b) return lnks[i];
    }
    return -1;
}

const std::vector<NodeId>& Topology::neighbors(NodeId n) const {
    return adjacency_[node_ordinal(n)];
}

NodeId Topology::access_switch(int host_index) const {
    const auto& nbrs = adjacency_[node_ordinal({NodeKind::Host, host_index})];
    for (NodeId n : nbrs) {
        if (n.kind == NodeKind::Switch) return n;
    }
    throw TopologyError("host h" + std::to_string(host_index) + " has no access switch");
}

std::vector<NodeId> Topology::shortest_path(NodeId a, NodeId b) const {
    if (!has_node(a)) throw TopologyError("shortest_path: unknown node " + a.str());
    if (!has_node(b)) throw TopologyError("shortest_path: unknown node " + b.str());
    if (a == b) return {a};

    // BFS from the destination, then walk greedily from the source picking
    // the smallest-id neighbor that still decreases the distance. That makes
    // equal-hop ties resolve to the lexicographically least node sequence.
    std::vector<int> dist = bfs_distances(ord_adj_, node_ordinal(b));
    if (dist[node_ordinal(a)] < 0) {
        throw TopologyError("shortest_path: " + a.str() + " cannot reach " + b.str());
    }

    std::vector<NodeId> path{a};
    NodeId cur = a;
    while (cur != b) {
        int d = dist[node_ordinal(cur)];
        for (NodeId nb : adjacency_[node_ordinal(cur)]) {
            if (dist[node_ordinal(nb)] == d - 1) {
                path.push_back(nb);
                cur = nb;
                break;
            }
        }
    }
    return path;
}

std::tuple<NodeId, NodeId, int> Topology::farthest_pair() const {
    int best = -1;
    NodeId ba{}, bb{};
    for (int a = 1; a <= host_count_; ++a) {
        std::vector<int> dist = bfs_distances(ord_adj_, a - 1);
        for (int b = a + 1; b <= host_count_; ++b) {
            if (dist[b - 1] > best) {
                best = dist[b - 1];
                ba = {NodeKind::Host, a};
                bb = {NodeKind::Host, b};
            }
        }
    }
    return {ba, bb, best};
}

Topology Topology::build_ieee118(std::uint64_t seed, double mean_pd_us,
                                 double pd_noise_stddev_us, double bandwidth_bps) {
    if (!(mean_pd_us > 0.0)) throw TopologyError("build_ieee118: mean_pd must be > 0");
    if (pd_noise_stddev_us < 0.0) throw TopologyError("build_ieee118: pd noise stddev must be >= 0");

    // Switch fabric: ring 1..45 plus express chords every 5 switches.
    std::vector<std::pair<int, int>> sw_edges;
    for (int i = 1; i <= kSwitches; ++i) sw_edges.emplace_back(i, i % kSwitches + 1);
    for (int k = 1; k + 5 <= kSwitches; k += 5) sw_edges.emplace_back(k, k + 5);

    // Switch-level distances decide the measurement pair before any labels
    // are fixed.
    std::vector<std::vector<int>> sw_adj(kSwitches);
    for (auto [u, v] : sw_edges) {
        sw_adj[u - 1].push_back(v - 1);
        sw_adj[v - 1].push_back(u - 1);
    }
    std::vector<std::vector<int>> sw_dist(kSwitches);
    int max_d = 0;
    for (int s = 0; s < kSwitches; ++s) {
        sw_dist[s] = bfs_distances(sw_adj, s);
        max_d = std::max(max_d, *std::max_element(sw_dist[s].begin(), sw_dist[s].end()));
    }

    // Raw host placement: switch k serves hosts {k, k+45, k+90}.
    auto raw_switch_of = [](int host) { return (host - 1) % kSwitches + 1; };
    auto hosts_on = [&](int sw) {
        std::vector<int> out;
        for (int h = sw; h <= kHosts; h += kSwitches) out.push_back(h);
        return out;
    };

    // Pick the endpoint switch whose far side carries the fewest hosts, so
    // the far hosts fit into labels {112..118}; ties go to the lowest index.
    int endpoint = -1;
    std::size_t best_far = kHosts + 1;
    for (int s = 1; s <= kSwitches; ++s) {
        if (*std::max_element(sw_dist[s - 1].begin(), sw_dist[s - 1].end()) != max_d) continue;
        std::size_t far_hosts = 0;
        for (int t = 1; t <= kSwitches; ++t) {
            if (sw_dist[s - 1][t - 1] == max_d) far_hosts += hosts_on(t).size();
        }
        if (far_hosts < best_far) {
            best_far = far_hosts;
            endpoint = s;
        }
    }
    if (endpoint < 0 || best_far > 7) {
        throw TopologyError("build_ieee118: no relabeling fits the measurement pair");
    }

    // label_of[node] starts as identity over raw host numbers, then gets
    // permuted: the lowest host on the endpoint switch becomes host 1 and the
    // far-side hosts become 112, 113, ... so that hosts 1 and 112 are the
    // lexicographically first maximum-hop pair.
    std::vector<int> label_of(kHosts + 1);
    std::vector<int> node_of(kHosts + 1);
    for (int h = 1; h <= kHosts; ++h) label_of[h] = node_of[h] = h;
    auto swap_labels = [&](int label_x, int label_y) {
        if (label_x == label_y) return;
        int nx = node_of[label_x], ny = node_of[label_y];
        std::swap(label_of[nx], label_of[ny]);
        std::swap(node_of[label_x], node_of[label_y]);
    };

    swap_labels(hosts_on(endpoint).front(), 1);

    std::vector<int> far_nodes;
    for (int t = 1; t <= kSwitches; ++t) {
        if (sw_dist[endpoint - 1][t - 1] == max_d) {
            for (int h : hosts_on(t)) far_nodes.push_back(h);
        }
    }
    std::sort(far_nodes.begin(), far_nodes.end(),
              [&](int x, int y) { return label_of[x] < label_of[y]; });
    int next_label = 112;
    for (int node : far_nodes) swap_labels(label_of[node], next_label++);

    // Materialize links in a fixed order (switch fabric, then host access
    // links by final label), drawing propagation-delay noise in that order.
    RandomStream pd_stream("topology-pd", seed);
    auto draw_pd = [&]() {
        return std::max(kMinPropDelayUs, pd_stream.gaussian(mean_pd_us, pd_noise_stddev_us));
    };

    std::vector<Link> links;
    for (auto [u, v] : sw_edges) {
        double pd = draw_pd();
        links.push_back(Link{{NodeKind::Switch, u},
                             {NodeKind::Switch, v},
                             bandwidth_bps,
                             pd,
                             pd * 200000.0 / 1e6});
    }
    for (int label = 1; label <= kHosts; ++label) {
        double pd = draw_pd();
        links.push_back(Link{{NodeKind::Host, label},
                             {NodeKind::Switch, raw_switch_of(node_of[label])},
                             bandwidth_bps,
                             pd,
                             pd * 200000.0 / 1e6});
    }

    return TopologyBuilder::assemble(kHosts, kSwitches, 200000.0, std::move(links));
}

namespace {

NodeId parse_node_ref(const std::string& ref) {
    if (ref.size() < 2) throw TopologyError("bad node reference '" + ref + "'");
    const char k = static_cast<char>(std::tolower(ref[0]));
    int idx = 0;
    try {
        idx = std::stoi(ref.substr(1));
    } catch (const std::exception&) {
        throw TopologyError("bad node reference '" + ref + "'");
    }
    if (idx <= 0) throw TopologyError("node index must be positive in '" + ref + "'");
    if (k == 'h') return {NodeKind::Host, idx};
    if (k == 's') return {NodeKind::Switch, idx};
    if (k == 'c') throw TopologyError("controller nodes are wired by the cluster config, not the topology document ('" + ref + "')");
    throw TopologyError("bad node reference '" + ref + "'");
}

void reject_unknown_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw TopologyError(where + ": unknown key '" + it.key() + "'");
        }
    }
}

} // namespace

Topology Topology::load(const nlohmann::json& doc) {
    if (!doc.is_object()) throw TopologyError("topology document must be an object");
    reject_unknown_keys(doc, {"propagation_speed_km_s", "nodes", "links"}, "topology");

    double speed = 200000.0;
    if (doc.contains("propagation_speed_km_s")) {
        speed = doc.at("propagation_speed_km_s").get<double>();
        if (!(speed > 0.0)) throw TopologyError("propagation_speed_km_s must be > 0");
    }
    if (!doc.contains("nodes") || !doc.at("nodes").is_array()) {
        throw TopologyError("topology: missing nodes[]");
    }
    if (!doc.contains("links") || !doc.at("links").is_array()) {
        throw TopologyError("topology: missing links[]");
    }

    std::set<std::pair<int, int>> seen; // (kind, index)
    int hosts = 0, switches = 0;
    for (const auto& n : doc.at("nodes")) {
        reject_unknown_keys(n, {"id", "kind"}, "node");
        if (!n.contains("id") || !n.contains("kind")) {
            throw TopologyError("node entries need id and kind");
        }
        const int id = n.at("id").get<int>();
        const std::string kind = n.at("kind").get<std::string>();
        if (id <= 0) throw TopologyError("node id must be positive");
        NodeKind k;
        if (kind == "host") k = NodeKind::Host;
        else if (kind == "switch") k = NodeKind::Switch;
        else if (kind == "controller") {
            throw TopologyError("controller nodes are wired by the cluster config, not the topology document (c" + std::to_string(id) + ")");
        } else {
            throw TopologyError("node kind must be host or switch, got '" + kind + "'");
        }
        if (!seen.insert({static_cast<int>(k), id}).second) {
            throw TopologyError("duplicate node id: " + NodeId{k, id}.str());
        }
        if (k == NodeKind::Host) hosts = std::max(hosts, id);
        else switches = std::max(switches, id);
    }
    // indices must be dense 1..count so ordinals work
    for (int h = 1; h <= hosts; ++h) {
        if (!seen.count({static_cast<int>(NodeKind::Host), h})) {
            throw TopologyError("host indices must be contiguous from 1; missing h" + std::to_string(h));
        }
    }
    for (int s = 1; s <= switches; ++s) {
        if (!seen.count({static_cast<int>(NodeKind::Switch), s})) {
            throw TopologyError("switch indices must be contiguous from 1; missing s" + std::to_string(s));
        }
    }

    std::vector<Link> links;
    std::set<std::pair<std::string, std::string>> seen_links;
    for (const auto& l : doc.at("links")) {
        reject_unknown_keys(l, {"a", "b", "bandwidth_bps", "length_km", "prop_delay_us"}, "link");
        if (!l.contains("a") || !l.contains("b")) throw TopologyError("link entries need a and b");
        NodeId a = parse_node_ref(l.at("a").get<std::string>());
        NodeId b = parse_node_ref(l.at("b").get<std::string>());
        const std::string lname = "link " + a.str() + "-" + b.str();
        if (a == b) throw TopologyError(lname + ": self-loop");
        if (!seen.count({static_cast<int>(a.kind), a.index})) throw TopologyError(lname + ": unknown node " + a.str());
        if (!seen.count({static_cast<int>(b.kind), b.index})) throw TopologyError(lname + ": unknown node " + b.str());
        if (!l.contains("bandwidth_bps")) throw TopologyError(lname + ": missing bandwidth_bps");
        const double bw = l.at("bandwidth_bps").get<double>();
        if (!(bw > 0.0)) throw TopologyError(lname + ": bandwidth must be > 0");
        const bool has_len = l.contains("length_km");
        const bool has_pd = l.contains("prop_delay_us");
        if (has_len == has_pd) {
            throw TopologyError(lname + ": exactly one of length_km / prop_delay_us required");
        }
        double pd, len;
        if (has_len) {
            len = l.at("length_km").get<double>();
            if (len < 0.0) throw TopologyError(lname + ": length must be >= 0");
            pd = queueing::propagation_delay_us(len, speed);
        } else {
            pd = l.at("prop_delay_us").get<double>();
            if (pd < 0.0) throw TopologyError(lname + ": prop_delay must be >= 0");
            len = pd / 1e6 * speed;
        }
        NodeId lo = std::min(a, b), hi = std::max(a, b);
        if (!seen_links.insert({lo.str(), hi.str()}).second) {
            throw TopologyError(lname + ": duplicate link");
        }
        links.push_back(Link{a, b, bw, pd, len});
    }

    Topology t = TopologyBuilder::assemble(hosts, switches, speed, std::move(links));

    // structural invariants: hosts hang off exactly one switch, graph connected
    for (int h = 1; h <= hosts; ++h) {
        const auto& nbrs = t.neighbors({NodeKind::Host, h});
        if (nbrs.size() != 1 || nbrs[0].kind != NodeKind::Switch) {
            throw TopologyError("host h" + std::to_string(h) +
                                " must attach to exactly one switch");
        }
    }
    if (hosts + switches > 0) {
        std::vector<std::vector<int>> adj(hosts + switches);
        for (const Link& l : t.links()) {
            adj[t.node_ordinal(l.a)].push_back(t.node_ordinal(l.b));
            adj[t.node_ordinal(l.b)].push_back(t.node_ordinal(l.a));
        }
        std::vector<int> dist = bfs_distances(adj, 0);
        for (int i = 0; i < hosts + switches; ++i) {
            if (dist[i] < 0) {
                NodeId n = i < hosts ? NodeId{NodeKind::Host, i + 1}
                                     : NodeId{NodeKind::Switch, i - hosts + 1};
                throw TopologyError("topology is disconnected: " + n.str() +
                                    " unreachable from h1");
            }
        }
    }
    return t;
}

Topology Topology::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TopologyError("cannot open topology file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw TopologyError("topology file " + path + ": " + e.what());
    }
    return load(doc);
}

nlohmann::json Topology::to_json() const {
    nlohmann::json doc;
    doc["propagation_speed_km_s"] = propagation_speed_km_s_;
    auto& nodes = doc["nodes"] = nlohmann::json::array();
    for (int h = 1; h <= host_count_; ++h) nodes.push_back({{"id", h}, {"kind", "host"}});
    for (int s = 1; s <= switch_count_; ++s) nodes.push_back({{"id", s}, {"kind", "switch"}});
    auto& links = doc["links"] = nlohmann::json::array();
    for (const Link& l : links_) {
        links.push_back({{"a", l.a.str()},
                         {"b", l.b.str()},
                         {"bandwidth_bps", l.bandwidth_bps},
                         {"prop_delay_us", l.prop_delay_us}});
    }
    return doc;
}

} // namespace sgsim
