#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "sgsim/topology.hpp"

using namespace sgsim;
using nlohmann::json;

namespace {

json line3_doc() {
    return json{{"propagation_speed_km_s", 200000.0},
                {"nodes", json::array({json{{"id", 1}, {"kind", "host"}},
                                       json{{"id", 2}, {"kind", "host"}},
                                       json{{"id", 1}, {"kind", "switch"}}})},
                {"links", json::array({json{{"a", "h1"}, {"b", "s1"},
                                            {"bandwidth_bps", 20e6}, {"length_km", 40.6614}},
                                       json{{"a", "h2"}, {"b", "s1"},
                                            {"bandwidth_bps", 20e6}, {"length_km", 40.6614}}})}};
}

} // namespace

TEST_CASE("default build has 118 hosts and 45 switches") {
    Topology t = Topology::build_ieee118(42);
    CHECK(t.host_count() == 118);
    CHECK(t.switch_count() == 45);
    // every host hangs off exactly one switch
    for (int h = 1; h <= 118; ++h) {
        const auto& nbrs = t.neighbors({NodeKind::Host, h});
        REQUIRE(nbrs.size() == 1);
        CHECK(nbrs[0].kind == NodeKind::Switch);
    }
}

TEST_CASE("zero noise pins every link delay at the mean") {
    Topology t = Topology::build_ieee118(42, 203.307, 0.0);
    for (const Link& l : t.links()) CHECK(l.prop_delay_us == 203.307);
}

TEST_CASE("build is deterministic in the seed") {
    Topology a = Topology::build_ieee118(42);
    Topology b = Topology::build_ieee118(42);
    Topology c = Topology::build_ieee118(43);
    REQUIRE(a.links().size() == b.links().size());
    bool all_equal = true, any_diff_c = false;
    for (std::size_t i = 0; i < a.links().size(); ++i) {
        all_equal &= a.links()[i].prop_delay_us == b.links()[i].prop_delay_us;
        any_diff_c |= a.links()[i].prop_delay_us != c.links()[i].prop_delay_us;
    }
    CHECK(all_equal);
    CHECK(any_diff_c);
}

TEST_CASE("generated delays are clamped at one microsecond") {
    // stddev far above the mean forces draws below zero; the clamp holds
    Topology t = Topology::build_ieee118(7, 10.0, 500.0);
    double lo = 1e18;
    for (const Link& l : t.links()) lo = std::min(lo, l.prop_delay_us);
    CHECK(lo >= 1.0);
}

TEST_CASE("hosts 1 and 112 are the canonical farthest pair") {
    Topology t = Topology::build_ieee118(42);
    auto [a, b, hops] = t.farthest_pair();
    CHECK(a == NodeId{NodeKind::Host, 1});
    CHECK(b == NodeId{NodeKind::Host, 112});
    CHECK(hops >= 2);

    // exhaustive check: no host pair is farther, and the pair is max-hop
    auto dist = oracles::all_pairs_hops(t);
    int max_hops = 0;
    for (int x = 1; x <= 118; ++x) {
        for (int y = x + 1; y <= 118; ++y) {
            max_hops = std::max(
                max_hops, dist[{NodeId{NodeKind::Host, x}, NodeId{NodeKind::Host, y}}]);
        }
    }
    CHECK(hops == max_hops);
    CHECK(dist[{NodeId{NodeKind::Host, 1}, NodeId{NodeKind::Host, 112}}] == max_hops);
    // path lookup agrees
    CHECK(static_cast<int>(t.shortest_path({NodeKind::Host, 1}, {NodeKind::Host, 112}).size()) ==
          max_hops + 1);
}

TEST_CASE("loader computes delay from line length") {
    Topology t = Topology::load(line3_doc());
    CHECK(t.host_count() == 2);
    CHECK(t.switch_count() == 1);
    for (const Link& l : t.links()) CHECK(l.prop_delay_us == doctest::Approx(203.307).epsilon(1e-12));
}

TEST_CASE("loader names the duplicate node id") {
    json doc = line3_doc();
    doc["nodes"].push_back(json{{"id", 2}, {"kind", "host"}});
    CHECK_THROWS_WITH_AS(Topology::load(doc), doctest::Contains("duplicate node id: h2"),
                         TopologyError);
}

TEST_CASE("loader flags a missing bandwidth") {
    json doc = line3_doc();
    doc["links"][1].erase("bandwidth_bps");
    CHECK_THROWS_WITH_AS(Topology::load(doc), doctest::Contains("missing bandwidth_bps"),
                         TopologyError);
}

TEST_CASE("loader wants exactly one of length_km and prop_delay_us") {
    json both = line3_doc();
    both["links"][0]["prop_delay_us"] = 10.0;
    CHECK_THROWS_AS(Topology::load(both), TopologyError);
    json neither = line3_doc();
    neither["links"][0].erase("length_km");
    CHECK_THROWS_AS(Topology::load(neither), TopologyError);
}

TEST_CASE("loader rejects unknown keys, self-loops and disconnection") {
    json unknown = line3_doc();
    unknown["frobnicate"] = 1;
    CHECK_THROWS_WITH_AS(Topology::load(unknown), doctest::Contains("unknown key"),
                         TopologyError);

    json selfloop = line3_doc();
    selfloop["links"][0]["b"] = "h1";
    CHECK_THROWS_WITH_AS(Topology::load(selfloop), doctest::Contains("self-loop"), TopologyError);

    json disconnected = line3_doc();
    disconnected["nodes"].push_back(json{{"id", 2}, {"kind", "switch"}});
    CHECK_THROWS_WITH_AS(Topology::load(disconnected), doctest::Contains("disconnected"),
                         TopologyError);
}

TEST_CASE("loader keeps controllers out of the data plane") {
    json doc = line3_doc();
    doc["nodes"].push_back(json{{"id", 1}, {"kind", "controller"}});
    CHECK_THROWS_WITH_AS(Topology::load(doc), doctest::Contains("cluster config"), TopologyError);
}

TEST_CASE("shortest path on a line and self path") {
    Topology t = Topology::load(line3_doc());
    auto path = t.shortest_path({NodeKind::Host, 1}, {NodeKind::Host, 2});
    REQUIRE(path.size() == 3);
    CHECK(path[0] == NodeId{NodeKind::Host, 1});
    CHECK(path[1] == NodeId{NodeKind::Switch, 1});
    CHECK(path[2] == NodeId{NodeKind::Host, 2});

    auto self = t.shortest_path({NodeKind::Host, 1}, {NodeKind::Host, 1});
    REQUIRE(self.size() == 1);
    CHECK(self[0] == NodeId{NodeKind::Host, 1});
}

TEST_CASE("unreachable pairs are an explicit error") {
    Topology t = Topology::load(line3_doc());
    CHECK_THROWS_AS(t.shortest_path({NodeKind::Host, 1}, {NodeKind::Host, 9}), TopologyError);
}

TEST_CASE("two-host line farthest pair") {
    Topology t = Topology::load(line3_doc());
    auto [a, b, hops] = t.farthest_pair();
    CHECK(a == NodeId{NodeKind::Host, 1});
    CHECK(b == NodeId{NodeKind::Host, 2});
    CHECK(hops == 2);
}

TEST_CASE("star of three hosts ties break to the least pair") {
    json doc{{"nodes", json::array({json{{"id", 1}, {"kind", "host"}},
                                    json{{"id", 2}, {"kind", "host"}},
                                    json{{"id", 3}, {"kind", "host"}},
                                    json{{"id", 1}, {"kind", "switch"}}})},
             {"links", json::array()}};
    for (int h = 1; h <= 3; ++h) {
        doc["links"].push_back(json{{"a", "h" + std::to_string(h)},
                                    {"b", "s1"},
                                    {"bandwidth_bps", 1e6},
                                    {"prop_delay_us", 5.0}});
    }
    Topology t = Topology::load(doc);
    auto [a, b, hops] = t.farthest_pair();
    CHECK(a == NodeId{NodeKind::Host, 1});
    CHECK(b == NodeId{NodeKind::Host, 2});
    CHECK(hops == 2);
}

TEST_CASE("paths match the brute-force oracle on small graphs") {
    // a handful of <= 20 node shapes: line, ring, double-attached mesh
    std::vector<json> docs;

    json line{{"nodes", json::array()}, {"links", json::array()}};
    for (int h = 1; h <= 4; ++h) line["nodes"].push_back(json{{"id", h}, {"kind", "host"}});
    for (int s = 1; s <= 6; ++s) line["nodes"].push_back(json{{"id", s}, {"kind", "switch"}});
    for (int s = 1; s < 6; ++s) {
        line["links"].push_back(json{{"a", "s" + std::to_string(s)},
                                     {"b", "s" + std::to_string(s + 1)},
                                     {"bandwidth_bps", 1e6},
                                     {"prop_delay_us", 7.0}});
    }
    for (int h = 1; h <= 4; ++h) {
        line["links"].push_back(json{{"a", "h" + std::to_string(h)},
                                     {"b", "s" + std::to_string((h * 2) % 6 + 1)},
                                     {"bandwidth_bps", 1e6},
                                     {"prop_delay_us", 7.0}});
    }
    docs.push_back(line);

    json ring{{"nodes", json::array()}, {"links", json::array()}};
    for (int h = 1; h <= 6; ++h) ring["nodes"].push_back(json{{"id", h}, {"kind", "host"}});
    for (int s = 1; s <= 8; ++s) ring["nodes"].push_back(json{{"id", s}, {"kind", "switch"}});
    for (int s = 1; s <= 8; ++s) {
        ring["links"].push_back(json{{"a", "s" + std::to_string(s)},
                                     {"b", "s" + std::to_string(s % 8 + 1)},
                                     {"bandwidth_bps", 1e6},
                                     {"prop_delay_us", 3.0}});
    }
    ring["links"].push_back(json{{"a", "s1"}, {"b", "s5"}, {"bandwidth_bps", 1e6},
                                 {"prop_delay_us", 3.0}});
    for (int h = 1; h <= 6; ++h) {
        ring["links"].push_back(json{{"a", "h" + std::to_string(h)},
                                     {"b", "s" + std::to_string((h * 3) % 8 + 1)},
                                     {"bandwidth_bps", 1e6},
                                     {"prop_delay_us", 3.0}});
    }
    docs.push_back(ring);

    for (const json& doc : docs) {
        Topology t = Topology::load(doc);
        auto dist = oracles::all_pairs_hops(t);
        for (int a = 1; a <= t.host_count(); ++a) {
            for (int b = 1; b <= t.host_count(); ++b) {
                NodeId na{NodeKind::Host, a}, nb{NodeKind::Host, b};
                auto path = t.shortest_path(na, nb);
                CHECK(static_cast<int>(path.size()) - 1 == dist[{na, nb}]);
                // path edges must exist
                for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                    CHECK(t.link_between(path[i], path[i + 1]) >= 0);
                }
            }
        }
    }
}

TEST_CASE("ieee118 shortest paths agree with the oracle hop counts") {
    Topology t = Topology::build_ieee118(42);
    auto dist = oracles::all_pairs_hops(t);
    for (int a = 1; a <= 118; a += 13) {
        for (int b = 2; b <= 118; b += 17) {
            if (a == b) continue;
            NodeId na{NodeKind::Host, a}, nb{NodeKind::Host, b};
            CHECK(static_cast<int>(t.shortest_path(na, nb).size()) - 1 == dist[{na, nb}]);
        }
    }
}
