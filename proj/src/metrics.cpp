#include "sgsim/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sgsim {

std::int64_t ThroughputSeries::total_bits() const {
    return std::accumulate(bits.begin(), bits.end(), std::int64_t{0});
}

WindowAccumulator::WindowAccumulator(double window_s, double duration_s)
    : window_s_(window_s), window_ticks_(ticks_from_seconds(window_s)) {
    if (!(window_s > 0.0)) throw std::invalid_argument("window must be > 0");
    if (!(duration_s >= window_s)) throw std::invalid_argument("duration must cover a window");
    window_count_ = static_cast<std::size_t>(ticks_from_seconds(duration_s) / window_ticks_);
    bits_.assign(window_count_, 0);
}

void WindowAccumulator::add(SimTime at, std::uint32_t bytes) {
    const std::size_t w = static_cast<std::size_t>(at / window_ticks_);
    if (w >= window_count_) return; // delivery past the measured horizon
    bits_[w] += static_cast<std::int64_t>(bytes) * 8;
}

ThroughputSeries WindowAccumulator::finish(std::string mode, int rep) const {
    ThroughputSeries s;
    s.window_s = window_s_;
    s.bits = bits_;
    s.mode = std::move(mode);
    s.rep = rep;
    return s;
}

ThroughputSeries windowed_throughput(
    const std::vector<std::pair<SimTime, std::uint32_t>>& deliveries, double window_s,
    double duration_s) {
    WindowAccumulator acc(window_s, duration_s);
    for (const auto& [at, bytes] : deliveries) acc.add(at, bytes);
    return acc.finish("", 0);
}

namespace {

double mean_over(const ThroughputSeries& s, std::size_t first, std::size_t last) {
    if (last <= first) return 0.0;
    std::int64_t sum = 0;
    for (std::size_t i = first; i < last; ++i) sum += s.bits[i];
    return static_cast<double>(sum) / (static_cast<double>(last - first) * s.window_s);
}

} // namespace

PhaseSummary phase_summary(const ThroughputSeries& series, double attack_start_s,
                           double attack_stop_s, double warmup_s) {
    const std::size_t n = series.bits.size();
    auto window_of = [&](double t_s) {
        auto w = static_cast<std::size_t>(t_s / series.window_s + 0.5);
        return std::min(w, n);
    };
    const std::size_t w_warm = window_of(warmup_s);
    const std::size_t w_start = window_of(attack_start_s);
    const std::size_t w_stop = window_of(attack_stop_s);
    if (w_start > n || w_stop > n || w_start >= w_stop) {
        throw std::invalid_argument("phase_summary: attack window outside the series");
    }

    PhaseSummary out;
    out.pre_bps = mean_over(series, w_warm, w_start);
    out.during_bps = mean_over(series, w_start, w_stop);
    out.post_bps = mean_over(series, w_stop, n);
    out.min_post_bps = out.post_bps;
    for (std::size_t i = w_stop; i < n; ++i) {
        out.min_post_bps = std::min(out.min_post_bps, series.bps(i));
    }
    if (out.pre_bps > 0.0) {
        out.loss_during_pct = (1.0 - out.during_bps / out.pre_bps) * 100.0;
        out.loss_post_min_pct = (1.0 - out.min_post_bps / out.pre_bps) * 100.0;
    }
    return out;
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

void export_throughput_csv(const RunReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "time_s,bits_per_s,mode,rep\n";
    for (const DosRepResult& r : report.reps) {
        for (std::size_t w = 0; w < r.series.bits.size(); ++w) {
            out << fmt6(static_cast<double>(w) * r.series.window_s) << ','
                << fmt6(r.series.bps(w)) << ',' << r.mode << ',' << r.rep << '\n';
        }
    }
}

void export_summary_csv(const RunReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "mode,pre_bps,during_bps,post_bps,loss_during_pct,loss_post_min_pct\n";
    // one row per mode, phase stats averaged across replications
    std::vector<std::string> modes;
    for (const DosRepResult& r : report.reps) {
        if (std::find(modes.begin(), modes.end(), r.mode) == modes.end()) {
            modes.push_back(r.mode);
        }
    }
    for (const std::string& mode : modes) {
        double pre = 0, during = 0, post = 0, loss_post_min = 0;
        int n = 0;
        for (const DosRepResult& r : report.reps) {
            if (r.mode != mode) continue;
            pre += r.phase.pre_bps;
            during += r.phase.during_bps;
            post += r.phase.post_bps;
            loss_post_min += r.phase.loss_post_min_pct;
            ++n;
        }
        pre /= n; during /= n; post /= n; loss_post_min /= n;
        const double loss_during = pre > 0 ? (1.0 - during / pre) * 100.0 : 0.0;
        out << mode << ',' << fmt6(pre) << ',' << fmt6(during) << ',' << fmt6(post) << ','
            << fmt6(loss_during) << ',' << fmt6(loss_post_min) << '\n';
    }
}

std::vector<std::vector<std::string>> parse_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

MatrixWriter::MatrixWriter(const Network& net, int cols) : net_(net), cols_(cols) {
    if (cols <= 0) throw std::invalid_argument("matrix cols must be > 0");
    const Topology& topo = net.topology();
    for (int s = 1; s <= topo.switch_count(); ++s) {
        const auto& sw = const_cast<Network&>(net_).switch_node(s);
        for (int p = 0; p < sw.port_count(); ++p) {
            const std::string base = "s" + std::to_string(s) + "_p" + std::to_string(p);
            labels_.push_back(base + "_qlen");
            labels_.push_back(base + "_txbytes");
            labels_.push_back(base + "_drops");
        }
    }
    for (int h = 1; h <= topo.host_count(); ++h) {
        labels_.push_back("h" + std::to_string(h) + "_rxbytes");
        labels_.push_back("h" + std::to_string(h) + "_lat_us");
    }
    available_ = static_cast<int>(labels_.size());
    if (available_ > cols_) {
        labels_.resize(cols_);
    } else {
        for (int i = available_; i < cols_; ++i) {
            labels_.push_back("pad" + std::to_string(i - available_ + 1));
        }
    }
}

void MatrixWriter::write_header(std::ostream& out) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (i) out << ',';
        out << labels_[i];
    }
    out << '\n';
}

void MatrixWriter::write_row(std::ostream& out) const {
    Network& net = const_cast<Network&>(net_);
    int written = 0;
    auto emit = [&](double v) {
        if (written >= cols_) return;
        if (written) out << ',';
        out << fmt6(v);
        ++written;
    };
    const Topology& topo = net.topology();
    for (int s = 1; s <= topo.switch_count() && written < cols_; ++s) {
        auto& sw = net.switch_node(s);
        for (int p = 0; p < sw.port_count() && written < cols_; ++p) {
            const SwitchPort& port = sw.port(p);
            emit(static_cast<double>(port.queue_len()));
            emit(static_cast<double>(port.tx_bytes()));
            emit(static_cast<double>(port.drops()));
        }
    }
    for (int h = 1; h <= topo.host_count() && written < cols_; ++h) {
        auto& host = net.host(h);
        emit(static_cast<double>(host.rx_bytes()));
        emit(host.last_latency_us());
    }
    while (written < cols_) emit(0.0);
    out << '\n';
}

} // namespace sgsim
