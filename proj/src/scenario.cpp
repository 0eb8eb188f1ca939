#include "sgsim/scenario.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>

#include "sgsim/engine.hpp"
#include "sgsim/network.hpp"

namespace sgsim {

namespace fs = std::filesystem;

namespace {

void check_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
        }
    }
}

template <typename T>
void read(const nlohmann::json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

void write_echo(const ScenarioConfig& cfg, const std::string& command,
                const std::string& out_dir) {
    nlohmann::json echo;
    echo["command"] = command;
    echo["config"] = cfg.to_json();
    std::ofstream out(fs::path(out_dir) / "run_config.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write run_config.json in " + out_dir);
    out << echo.dump(2) << '\n';
}

} // namespace

ScenarioConfig ScenarioConfig::defaults() { return ScenarioConfig{}; }

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& doc) {
    ScenarioConfig cfg;
    check_keys(doc,
               {"seeds", "replications", "scale", "topology", "cluster", "dataplane",
                "traffic", "attack", "bench", "matrix", "failover"},
               "config");
    read(doc, "seeds", cfg.seeds);
    read(doc, "replications", cfg.replications);
    read(doc, "scale", cfg.scale);

    if (doc.contains("topology")) {
        const auto& t = doc.at("topology");
        check_keys(t, {"builtin", "file", "mean_pd_us", "pd_noise_stddev_us", "bandwidth_bps"},
                   "topology");
        if (t.contains("file")) {
            cfg.topology.file = t.at("file").get<std::string>();
            cfg.topology.builtin.clear();
        }
        read(t, "builtin", cfg.topology.builtin);
        read(t, "mean_pd_us", cfg.topology.mean_pd_us);
        read(t, "pd_noise_stddev_us", cfg.topology.pd_noise_stddev_us);
        read(t, "bandwidth_bps", cfg.topology.bandwidth_bps);
    }

    if (doc.contains("cluster")) {
        const auto& c = doc.at("cluster");
        check_keys(c,
                   {"sync_delay_us", "detection_timeout_s", "inbox_capacity",
                    "control_link_bandwidth_bps", "control_link_prop_us", "centralized",
                    "distributed3"},
                   "cluster");
        read(c, "sync_delay_us", cfg.cluster.sync_delay_us);
        read(c, "detection_timeout_s", cfg.cluster.failure_detection_timeout_s);
        read(c, "inbox_capacity", cfg.cluster.inbox_capacity);
        read(c, "control_link_bandwidth_bps", cfg.cluster.control_link_bandwidth_bps);
        read(c, "control_link_prop_us", cfg.cluster.control_link_prop_us);
        for (const char* mode : {"centralized", "distributed3"}) {
            if (!c.contains(mode)) continue;
            const auto& m = c.at(mode);
            check_keys(m, {"s0_us", "alpha"}, mode);
            ControllerParams& p = mode == std::string("centralized") ? cfg.cluster.centralized
                                                                     : cfg.cluster.distributed;
            read(m, "s0_us", p.s0_us);
            read(m, "alpha", p.alpha);
        }
    }

    if (doc.contains("dataplane")) {
        const auto& d = doc.at("dataplane");
        check_keys(d,
                   {"port_queue_capacity", "miss_buffer_capacity", "miss_buffer_ttl_s",
                    "flow_idle_timeout_s", "flow_hard_timeout_s", "service_jitter_rate_per_s"},
                   "dataplane");
        read(d, "port_queue_capacity", cfg.dataplane.port_queue_capacity);
        read(d, "miss_buffer_capacity", cfg.dataplane.miss_buffer_capacity);
        read(d, "miss_buffer_ttl_s", cfg.dataplane.miss_buffer_ttl_s);
        read(d, "flow_idle_timeout_s", cfg.dataplane.flow_idle_timeout_s);
        read(d, "flow_hard_timeout_s", cfg.dataplane.flow_hard_timeout_s);
        read(d, "service_jitter_rate_per_s", cfg.dataplane.service_jitter_rate_per_s);
    }

    if (doc.contains("traffic")) {
        const auto& t = doc.at("traffic");
        check_keys(t, {"background_bps", "packet_size_bytes", "ack_every", "src", "dst"},
                   "traffic");
        read(t, "background_bps", cfg.dos.background_bps);
        read(t, "packet_size_bytes", cfg.dos.background_packet_bytes);
        read(t, "ack_every", cfg.dos.ack_every);
        read(t, "src", cfg.dos.background_src);
        read(t, "dst", cfg.dos.background_dst);
    }

    if (doc.contains("attack")) {
        const auto& a = doc.at("attack");
        check_keys(a,
                   {"attacker", "victim", "flood_count", "flood_iat_us", "flood_size_bytes",
                    "start_s", "stop_s", "duration_s", "warmup_s", "window_s"},
                   "attack");
        read(a, "attacker", cfg.dos.attacker);
        read(a, "victim", cfg.dos.victim);
        read(a, "flood_count", cfg.dos.flood_count);
        read(a, "flood_iat_us", cfg.dos.flood_iat_us);
        read(a, "flood_size_bytes", cfg.dos.flood_packet_bytes);
        read(a, "start_s", cfg.dos.attack_start_s);
        read(a, "stop_s", cfg.dos.attack_stop_s);
        read(a, "duration_s", cfg.dos.duration_s);
        read(a, "warmup_s", cfg.dos.warmup_s);
        read(a, "window_s", cfg.dos.window_s);
    }

    if (doc.contains("bench")) {
        const auto& b = doc.at("bench");
        check_keys(b, {"sweep", "pingpong"}, "bench");
        if (b.contains("sweep")) {
            const auto& s = b.at("sweep");
            check_keys(s, {"switch_counts", "per_switch_rate_per_s", "duration_s", "skip_s"},
                       "sweep");
            read(s, "switch_counts", cfg.sweep.switch_counts);
            read(s, "per_switch_rate_per_s", cfg.sweep.per_switch_rate_per_s);
            read(s, "duration_s", cfg.sweep.duration_s);
            read(s, "skip_s", cfg.sweep.skip_s);
        }
        if (b.contains("pingpong")) {
            const auto& p = b.at("pingpong");
            check_keys(p, {"node_a", "node_b", "count", "payload_bytes", "warm", "gap_us"},
                       "pingpong");
            read(p, "node_a", cfg.pingpong.node_a);
            read(p, "node_b", cfg.pingpong.node_b);
            read(p, "count", cfg.pingpong.count);
            read(p, "payload_bytes", cfg.pingpong.payload_bytes);
            read(p, "warm", cfg.pingpong.warm);
            read(p, "gap_us", cfg.pingpong.gap_us);
        }
    }

    if (doc.contains("matrix")) {
        const auto& m = doc.at("matrix");
        check_keys(m, {"rows", "cols", "duration_s", "mode"}, "matrix");
        read(m, "rows", cfg.matrix.rows);
        read(m, "cols", cfg.matrix.cols);
        read(m, "duration_s", cfg.matrix.duration_s);
        read(m, "mode", cfg.matrix.mode);
    }

    if (doc.contains("failover")) {
        const auto& f = doc.at("failover");
        check_keys(f, {"enabled", "controller", "at_s"}, "failover");
        read(f, "enabled", cfg.failover.enabled);
        read(f, "controller", cfg.failover.controller);
        read(f, "at_s", cfg.failover.at_s);
    }

    cfg.validate();
    return cfg;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    return from_json(doc);
}

nlohmann::json ScenarioConfig::to_json() const {
    nlohmann::json doc;
    doc["seeds"] = seeds;
    doc["replications"] = replications;
    doc["scale"] = scale;
    auto& t = doc["topology"];
    if (!topology.file.empty()) t["file"] = topology.file;
    else t["builtin"] = topology.builtin;
    t["mean_pd_us"] = topology.mean_pd_us;
    t["pd_noise_stddev_us"] = topology.pd_noise_stddev_us;
    t["bandwidth_bps"] = topology.bandwidth_bps;
    auto& c = doc["cluster"];
    c["sync_delay_us"] = cluster.sync_delay_us;
    c["detection_timeout_s"] = cluster.failure_detection_timeout_s;
    c["inbox_capacity"] = cluster.inbox_capacity;
    c["control_link_bandwidth_bps"] = cluster.control_link_bandwidth_bps;
    c["control_link_prop_us"] = cluster.control_link_prop_us;
    c["centralized"] = {{"s0_us", cluster.centralized.s0_us}, {"alpha", cluster.centralized.alpha}};
    c["distributed3"] = {{"s0_us", cluster.distributed.s0_us}, {"alpha", cluster.distributed.alpha}};
    auto& d = doc["dataplane"];
    d["port_queue_capacity"] = dataplane.port_queue_capacity;
    d["miss_buffer_capacity"] = dataplane.miss_buffer_capacity;
    d["miss_buffer_ttl_s"] = dataplane.miss_buffer_ttl_s;
    d["flow_idle_timeout_s"] = dataplane.flow_idle_timeout_s;
    d["flow_hard_timeout_s"] = dataplane.flow_hard_timeout_s;
    d["service_jitter_rate_per_s"] = dataplane.service_jitter_rate_per_s;
    auto& tr = doc["traffic"];
    tr["background_bps"] = dos.background_bps;
    tr["packet_size_bytes"] = dos.background_packet_bytes;
    tr["ack_every"] = dos.ack_every;
    tr["src"] = dos.background_src;
    tr["dst"] = dos.background_dst;
    auto& a = doc["attack"];
    a["attacker"] = dos.attacker;
    a["victim"] = dos.victim;
    a["flood_count"] = dos.flood_count;
    a["flood_iat_us"] = dos.flood_iat_us;
    a["flood_size_bytes"] = dos.flood_packet_bytes;
    a["start_s"] = dos.attack_start_s;
    a["stop_s"] = dos.attack_stop_s;
    a["duration_s"] = dos.duration_s;
    a["warmup_s"] = dos.warmup_s;
    a["window_s"] = dos.window_s;
    auto& b = doc["bench"];
    b["sweep"] = {{"switch_counts", sweep.switch_counts},
                  {"per_switch_rate_per_s", sweep.per_switch_rate_per_s},
                  {"duration_s", sweep.duration_s},
                  {"skip_s", sweep.skip_s}};
    b["pingpong"] = {{"node_a", pingpong.node_a},   {"node_b", pingpong.node_b},
                     {"count", pingpong.count},     {"payload_bytes", pingpong.payload_bytes},
                     {"warm", pingpong.warm},       {"gap_us", pingpong.gap_us}};
    doc["matrix"] = {{"rows", matrix.rows},
                     {"cols", matrix.cols},
                     {"duration_s", matrix.duration_s},
                     {"mode", matrix.mode}};
    doc["failover"] = {{"enabled", failover.enabled},
                       {"controller", failover.controller},
                       {"at_s", failover.at_s}};
    return doc;
}

std::uint64_t ScenarioConfig::seed_for_rep(int rep) const {
    if (static_cast<std::size_t>(rep) < seeds.size()) return seeds[rep];
    return seeds.front() + static_cast<std::uint64_t>(rep);
}

void ScenarioConfig::apply_scale() {
    if (scale == "desk") return;
    if (scale != "full") throw ConfigError("scale must be 'desk' or 'full'");
    topology.bandwidth_bps *= 1000.0;
    cluster.control_link_bandwidth_bps *= 1000.0;
    dos.background_bps *= 1000.0;
    scale = "desk"; // applied exactly once
}

void ScenarioConfig::validate() const {
    if (seeds.empty()) throw ConfigError("seeds must not be empty");
    if (replications < 1) throw ConfigError("replications must be >= 1");
    if (scale != "desk" && scale != "full") throw ConfigError("scale must be 'desk' or 'full'");
    if (topology.file.empty() && topology.builtin != "ieee118") {
        throw ConfigError("topology.builtin must be 'ieee118' (or give topology.file)");
    }
    if (matrix.rows <= 0 || matrix.cols <= 0) throw ConfigError("matrix dims must be > 0");
    if (!(matrix.duration_s > 0.0)) throw ConfigError("matrix duration must be > 0");
    cluster_mode_from_string(matrix.mode);
    sweep.validate();
    pingpong.validate();
}

Topology ScenarioConfig::build_topology(std::uint64_t seed) const {
    if (!topology.file.empty()) return Topology::load_file(topology.file);
    return Topology::build_ieee118(seed, topology.mean_pd_us, topology.pd_noise_stddev_us,
                                   topology.bandwidth_bps);
}

RunReport cmd_run_dos(const ScenarioConfig& cfg, const std::string& out_dir) {
    ScenarioConfig run = cfg;
    run.apply_scale();
    run.validate();
    fs::create_directories(out_dir);

    RunReport report;
    report.window_s = run.dos.window_s;
    report.attack_start_s = run.dos.attack_start_s;
    report.attack_stop_s = run.dos.attack_stop_s;
    report.warmup_s = run.dos.warmup_s;
    report.config_echo = cfg.to_json();

    for (ClusterMode mode : {ClusterMode::Centralized, ClusterMode::DistributedFlat}) {
        ClusterConfig cc = run.cluster;
        cc.mode = mode;
        for (int rep = 0; rep < run.replications; ++rep) {
            const std::uint64_t seed = run.seed_for_rep(rep);
            Topology topo = run.build_topology(seed);
            DosScenarioConfig dos = run.dos;
            if (run.failover.enabled) {
                dos.fail_one_controller = true;
                dos.fail_controller_id =
                    mode == ClusterMode::Centralized ? 0 : run.failover.controller;
                dos.fail_at_s = run.failover.at_s;
            }
            report.reps.push_back(run_dos_rep(topo, cc, run.dataplane, dos, seed, rep));
        }
    }

    export_throughput_csv(report, (fs::path(out_dir) / "throughput.csv").string());
    export_summary_csv(report, (fs::path(out_dir) / "summary.csv").string());
    write_echo(cfg, "run-dos", out_dir);
    return report;
}

std::vector<SweepResult> cmd_bench_sweep(const ScenarioConfig& cfg, const std::string& out_dir) {
    ScenarioConfig run = cfg;
    run.apply_scale();
    run.validate();
    fs::create_directories(out_dir);
    std::vector<SweepResult> results;
    results.push_back(run_sweep(run.sweep, run.cluster, ClusterMode::Centralized));
    results.push_back(run_sweep(run.sweep, run.cluster, ClusterMode::DistributedFlat));
    export_sweep_csv(results, (fs::path(out_dir) / "sweep.csv").string());
    write_echo(cfg, "bench sweep", out_dir);
    return results;
}

std::vector<PingPongResult> cmd_bench_pingpong(const ScenarioConfig& cfg,
                                               const std::string& out_dir) {
    ScenarioConfig run = cfg;
    run.apply_scale();
    run.validate();
    fs::create_directories(out_dir);
    const std::uint64_t seed = run.seed_for_rep(0);
    Topology topo = run.build_topology(seed);

    std::vector<PingPongResult> results;
    for (bool acked : {false, true}) {
        PingPongConfig pc = run.pingpong;
        pc.acknowledged = acked;
        for (ClusterMode mode : {ClusterMode::Centralized, ClusterMode::DistributedFlat}) {
            results.push_back(
                run_pingpong(topo, run.cluster, mode, run.dataplane, pc, seed));
        }
    }
    export_latency_csv(results, (fs::path(out_dir) / "latency.csv").string());
    export_pingpong_summary_csv(results, (fs::path(out_dir) / "pingpong_summary.csv").string());
    write_echo(cfg, "bench pingpong", out_dir);
    return results;
}

double cmd_export_matrix(const ScenarioConfig& cfg, const std::string& out_dir,
                         std::optional<int> rows_opt, std::optional<int> cols_opt) {
    ScenarioConfig run = cfg;
    run.apply_scale();
    const int rows = rows_opt.value_or(run.matrix.rows);
    const int cols = cols_opt.value_or(run.matrix.cols);
    if (rows <= 0) throw ConfigError("matrix rows must be > 0");
    if (cols <= 0) throw ConfigError("matrix cols must be > 0");
    run.matrix.rows = rows;
    run.matrix.cols = cols;
    run.validate();
    fs::create_directories(out_dir);

    const std::uint64_t seed = run.seed_for_rep(0);
    Topology topo = run.build_topology(seed);
    ClusterConfig cc = run.cluster;
    cc.mode = cluster_mode_from_string(run.matrix.mode);

    Engine engine;
    Network net(engine, topo, cc, run.dataplane, seed);

    // grid telemetry: every host reports to the concentrator in groups of
    // four every four seconds
    const SimTime duration = ticks_from_seconds(run.matrix.duration_s);
    std::vector<std::unique_ptr<TrafficGenerator>> gens;
    for (int h = 1; h <= topo.host_count(); ++h) {
        TrafficSpec spec;
        spec.pattern = TrafficPattern::PeriodicGroup;
        spec.src = h;
        spec.dst = h == 1 ? 2 : 1;
        spec.start = 0;
        spec.stop = duration;
        spec.traffic_class = kClassTelemetry;
        spec.packet_size_bytes = 1500;
        gens.push_back(std::make_unique<TrafficGenerator>(net, spec));
        gens.back()->start();
    }

    const SimTime interval = duration / rows;
    if (interval < 1) throw ConfigError("matrix rows exceed the tick resolution of duration");

    std::ofstream out(fs::path(out_dir) / "matrix.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write matrix.csv in " + out_dir);
    MatrixWriter writer(net, cols);
    writer.write_header(out);

    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 1; r <= rows; ++r) {
        engine.run_until(static_cast<SimTime>(r) * interval);
        writer.write_row(out);
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_echo(cfg, "export-matrix", out_dir);
    return elapsed / rows;
}

void cmd_validate(const std::string& config_path) {
    ScenarioConfig cfg = ScenarioConfig::from_file(config_path);
    cfg.validate();
}

void export_sweep_csv(const std::vector<SweepResult>& results, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "mode,switches,offered_per_s,responses_per_s,oracle_per_s\n";
    for (const SweepResult& r : results) {
        for (const SweepPoint& p : r.points) {
            out << to_string(r.mode) << ',' << p.switches << ',' << fmt6(p.offered_per_s)
                << ',' << fmt6(p.responses_per_s) << ',' << fmt6(p.oracle_capacity_per_s)
                << '\n';
        }
    }
}

void export_latency_csv(const std::vector<PingPongResult>& results, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "seq,rtt_us,one_way_us,mode,transport\n";
    for (const PingPongResult& r : results) {
        for (std::size_t i = 0; i < r.rtts_us.size(); ++i) {
            out << i << ',' << fmt6(r.rtts_us[i]) << ',' << fmt6(r.rtts_us[i] / 2.0) << ','
                << to_string(r.mode) << ',' << (r.acknowledged ? "ack" : "unack") << '\n';
        }
    }
}

void export_pingpong_summary_csv(const std::vector<PingPongResult>& results,
                                 const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "transport,centralized_mean_one_way_us,distributed3_mean_one_way_us,reduction_pct\n";
    for (bool acked : {false, true}) {
        const PingPongResult* cent = nullptr;
        const PingPongResult* dist = nullptr;
        for (const PingPongResult& r : results) {
            if (r.acknowledged != acked) continue;
            if (r.mode == ClusterMode::Centralized) cent = &r;
            else dist = &r;
        }
        if (!cent || !dist) continue;
        out << (acked ? "ack" : "unack") << ',' << fmt6(cent->mean_one_way_us()) << ','
            << fmt6(dist->mean_one_way_us()) << ','
            << fmt6(compare_latency_reduction_pct(*dist, *cent)) << '\n';
    }
}

} // namespace sgsim
