#ifndef SGSIM_METRICS_HPP
#define SGSIM_METRICS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sgsim/network.hpp"
#include "sgsim/sim_time.hpp"

namespace sgsim {

// Bits delivered at a sink per fixed window. Windows are contiguous,
// non-overlapping and cover [0, duration).
struct ThroughputSeries {
    double window_s = 1.0;
    std::vector<std::int64_t> bits;
    std::string mode;
    int rep = 0;

    std::int64_t total_bits() const;
    double bps(std::size_t window) const {
        return static_cast<double>(bits[window]) / window_s;
    }
};

// Live accumulator fed from the delivery hook.
class WindowAccumulator {
public:
    WindowAccumulator(double window_s, double duration_s);
    void add(SimTime at, std::uint32_t bytes);
    ThroughputSeries finish(std::string mode, int rep) const;

private:
    double window_s_;
    SimTime window_ticks_;
    std::size_t window_count_;
    std::vector<std::int64_t> bits_;
};

// Offline variant over (time, bytes) delivery records.
ThroughputSeries windowed_throughput(const std::vector<std::pair<SimTime, std::uint32_t>>& deliveries,
                                     double window_s, double duration_s);

struct PhaseSummary {
    double pre_bps = 0.0;
    double during_bps = 0.0;
    double post_bps = 0.0;
    double min_post_bps = 0.0;
    double loss_during_pct = 0.0;
    double loss_post_min_pct = 0.0;
};

// Phase means over [warmup_end, attack_start), [attack_start, attack_stop)
// and [attack_stop, end). The warmup cut keeps initial route learning out of
// the pre-attack baseline.
PhaseSummary phase_summary(const ThroughputSeries& series, double attack_start_s,
                           double attack_stop_s, double warmup_s = 5.0);

struct ControllerSnapshot {
    int id = 0;
    bool up = true;
    std::uint64_t received = 0;
    std::uint64_t processed = 0;
    std::uint64_t dropped_inbox = 0;
    std::uint64_t received_while_down = 0;
    std::uint64_t lost_on_death = 0;
};

// One DoS replication worth of measurements.
struct DosRepResult {
    std::string mode;
    int rep = 0;
    std::uint64_t seed = 0;
    ThroughputSeries series;
    PhaseSummary phase;
    NetworkCounters counters;
    std::vector<ControllerSnapshot> controllers;
    std::vector<double> ack_rtts_us;
    std::vector<std::pair<SimTime, std::uint64_t>> victim_drop_series;
    std::uint64_t victim_port_drops = 0;
    std::int64_t delivered_background_bits = 0;
    SimTime last_remaster_at = 0;
    std::uint64_t mastership_version = 0;
    SimTime last_routed_at_failed = -1;
};

struct RunReport {
    double window_s = 1.0;
    double attack_start_s = 10.0;
    double attack_stop_s = 20.0;
    double warmup_s = 5.0;
    std::vector<DosRepResult> reps;
    nlohmann::json config_echo;
};

// Fixed 6-decimal rendering used by every CSV so reruns are byte-identical.
std::string fmt6(double v);

void export_throughput_csv(const RunReport& report, const std::string& path);
void export_summary_csv(const RunReport& report, const std::string& path);

// Minimal CSV reader for round-trip checks: rows of comma-split cells.
std::vector<std::vector<std::string>> parse_csv(const std::string& path);

// Streams the cross-layer sample matrix: one row per sampling interval,
// columns in a fixed order (per-switch port counters, then per-host sink
// counters), zero-padded or truncated to the requested width. Row 1 carries
// the column labels.
class MatrixWriter {
public:
    MatrixWriter(const Network& net, int cols);
    const std::vector<std::string>& labels() const { return labels_; }
    int available_columns() const { return available_; }
    void write_header(std::ostream& out) const;
    void write_row(std::ostream& out) const;

private:
    const Network& net_;
    int cols_;
    int available_ = 0;
    std::vector<std::string> labels_;
};

} // namespace sgsim

#endif
