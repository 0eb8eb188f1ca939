// sgsim — smart-grid SDN network simulator CLI.
//
// Exit codes: 0 success, 2 usage/config error, 3 runtime error.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgsim/scenario.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::uint64_t> seeds;
    int reps = 0;
    std::string scale;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "scenario config file (JSON)");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seeds, "replication seed (repeatable)");
    cmd->add_option("--reps", opts.reps, "replication count");
    cmd->add_option("--scale", opts.scale, "desk | full")
        ->check(CLI::IsMember({"desk", "full"}));
}

sgsim::ScenarioConfig load_config(const CommonOpts& opts) {
    sgsim::ScenarioConfig cfg = opts.config_path.empty()
                                    ? sgsim::ScenarioConfig::defaults()
                                    : sgsim::ScenarioConfig::from_file(opts.config_path);
    // flags win over config keys
    if (!opts.seeds.empty()) {
        cfg.seeds = opts.seeds;
        if (opts.reps == 0) cfg.replications = static_cast<int>(opts.seeds.size());
    }
    if (opts.reps > 0) cfg.replications = opts.reps;
    if (!opts.scale.empty()) cfg.scale = opts.scale;
    cfg.validate();
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sgsim: deterministic smart-grid SDN simulator"};
    app.require_subcommand(1);

    CommonOpts dos_opts, sweep_opts, ping_opts, matrix_opts;
    std::string validate_path;
    int matrix_rows = 0, matrix_cols = 0;

    CLI::App* dos = app.add_subcommand("run-dos", "flood-resilience scenario, both modes");
    add_common(dos, dos_opts);

    CLI::App* bench = app.add_subcommand("bench", "controller benchmarks");
    bench->require_subcommand(1);
    CLI::App* sweep = bench->add_subcommand("sweep", "throughput scalability sweep");
    add_common(sweep, sweep_opts);
    CLI::App* ping = bench->add_subcommand("pingpong", "echo latency measurement");
    add_common(ping, ping_opts);

    CLI::App* matrix = app.add_subcommand("export-matrix", "cross-layer sample matrix");
    add_common(matrix, matrix_opts);
    CLI::Option* rows_opt = matrix->add_option("--rows", matrix_rows, "sample rows (default 10000)");
    CLI::Option* cols_opt = matrix->add_option("--cols", matrix_cols, "columns (default 691)");

    CLI::App* validate = app.add_subcommand("validate", "check a config and exit");
    validate->add_option("--config", validate_path, "scenario config file (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (dos->parsed()) {
            const sgsim::ScenarioConfig cfg = load_config(dos_opts);
            const sgsim::RunReport report = sgsim::cmd_run_dos(cfg, dos_opts.out_dir);
            for (const auto& rep : report.reps) {
                std::printf("%s rep %d: pre %.3f Mbit/s, during %.3f, post %.3f, "
                            "loss_during %.2f%%, loss_post_min %.2f%%\n",
                            rep.mode.c_str(), rep.rep, rep.phase.pre_bps / 1e6,
                            rep.phase.during_bps / 1e6, rep.phase.post_bps / 1e6,
                            rep.phase.loss_during_pct, rep.phase.loss_post_min_pct);
            }
            std::printf("wrote %s/throughput.csv, summary.csv\n", dos_opts.out_dir.c_str());
        } else if (sweep->parsed()) {
            const sgsim::ScenarioConfig cfg = load_config(sweep_opts);
            const auto results = sgsim::cmd_bench_sweep(cfg, sweep_opts.out_dir);
            for (const auto& r : results) {
                for (const auto& p : r.points) {
                    std::printf("%s n=%d: %.1f responses/s (oracle %.1f)\n",
                                sgsim::to_string(r.mode), p.switches, p.responses_per_s,
                                p.oracle_capacity_per_s);
                }
            }
            std::printf("wrote %s/sweep.csv\n", sweep_opts.out_dir.c_str());
        } else if (ping->parsed()) {
            const sgsim::ScenarioConfig cfg = load_config(ping_opts);
            const auto results = sgsim::cmd_bench_pingpong(cfg, ping_opts.out_dir);
            for (const auto& r : results) {
                std::printf("%s %s (%d<->%d): mean one-way %.3f us\n",
                            sgsim::to_string(r.mode), r.acknowledged ? "ack" : "unack",
                            r.node_a, r.node_b, r.mean_one_way_us());
            }
            std::printf("wrote %s/latency.csv, pingpong_summary.csv\n", ping_opts.out_dir.c_str());
        } else if (matrix->parsed()) {
            const sgsim::ScenarioConfig cfg = load_config(matrix_opts);
            const double per_row = sgsim::cmd_export_matrix(
                cfg, matrix_opts.out_dir,
                rows_opt->count() ? std::optional<int>(matrix_rows) : std::nullopt,
                cols_opt->count() ? std::optional<int>(matrix_cols) : std::nullopt);
            std::printf("wrote %s/matrix.csv (%.6f s wall-clock per row)\n",
                        matrix_opts.out_dir.c_str(), per_row);
        } else if (validate->parsed()) {
            sgsim::cmd_validate(validate_path);
            std::printf("ok\n");
        }
    } catch (const sgsim::ConfigError& e) {
        std::fprintf(stderr, "error: config: %s\n", e.what());
        return 2;
    } catch (const sgsim::TopologyError& e) {
        std::fprintf(stderr, "error: config: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: config: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: runtime: %s\n", e.what());
        return 3;
    }
    return 0;
}
