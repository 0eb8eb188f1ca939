#ifndef SGSIM_SCENARIO_HPP
#define SGSIM_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgsim/bench.hpp"
#include "sgsim/controlplane.hpp"
#include "sgsim/dataplane.hpp"
#include "sgsim/metrics.hpp"
#include "sgsim/topology.hpp"
#include "sgsim/traffic.hpp"

namespace sgsim {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TopologySection {
    std::string builtin = "ieee118"; // or empty when file is set
    std::string file;                // topology-config document path
    double mean_pd_us = 203.307;
    double pd_noise_stddev_us = 20.33;
    double bandwidth_bps = 20e6;
};

struct MatrixSection {
    int rows = 10000;
    int cols = 691;
    double duration_s = 30.0;
    std::string mode = "distributed3";
};

struct FailoverSection {
    bool enabled = false;
    int controller = 0;
    double at_s = 15.0;
};

// Everything one experiment family needs, with the reference flood-scenario
// defaults baked in. Loaded strictly: unknown keys are rejected, flags win
// over file values.
struct ScenarioConfig {
    std::vector<std::uint64_t> seeds{42};
    int replications = 3;
    std::string scale = "desk"; // desk | full (x1000 on rates and bandwidths)

    TopologySection topology;
    ClusterConfig cluster;
    DataplaneParams dataplane;
    DosScenarioConfig dos;
    SweepConfig sweep;
    PingPongConfig pingpong;
    MatrixSection matrix;
    FailoverSection failover;

    static ScenarioConfig defaults();
    static ScenarioConfig from_json(const nlohmann::json& doc);
    static ScenarioConfig from_file(const std::string& path);
    nlohmann::json to_json() const;

    // Seed for replication i: the explicit list when long enough, otherwise
    // seeds[0] + i.
    std::uint64_t seed_for_rep(int rep) const;
    void apply_scale(); // multiplies rates/bandwidths when scale == full
    void validate() const;

    Topology build_topology(std::uint64_t seed) const;
};

// Command layer shared by the CLI and the test suites. Each writes its report
// files plus a config echo into out_dir.
RunReport cmd_run_dos(const ScenarioConfig& cfg, const std::string& out_dir);
std::vector<SweepResult> cmd_bench_sweep(const ScenarioConfig& cfg, const std::string& out_dir);
std::vector<PingPongResult> cmd_bench_pingpong(const ScenarioConfig& cfg,
                                               const std::string& out_dir);
// Returns wall-clock seconds per emitted row.
double cmd_export_matrix(const ScenarioConfig& cfg, const std::string& out_dir,
                         std::optional<int> rows = std::nullopt,
                         std::optional<int> cols = std::nullopt);
void cmd_validate(const std::string& config_path);

void export_sweep_csv(const std::vector<SweepResult>& results, const std::string& path);
void export_latency_csv(const std::vector<PingPongResult>& results, const std::string& path);
void export_pingpong_summary_csv(const std::vector<PingPongResult>& results,
                                 const std::string& path);

} // namespace sgsim

#endif
