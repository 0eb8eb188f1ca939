#include "sgsim/queueing.hpp"

#include <cmath>
#include <string>

namespace sgsim::queueing {

double interarrival_pdf(double t_s, double lambda) {
    if (t_s < 0.0) throw std::invalid_argument("interarrival_pdf: t must be >= 0");
    if (!(lambda > 0.0)) throw std::invalid_argument("interarrival_pdf: lambda must be > 0");
    return lambda * std::exp(-lambda * t_s);
}

double mean_iat(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("mean_iat: lambda must be > 0");
    return 1.0 / lambda;
}

double service_pdf(double s_s, double mu) {
    if (s_s < 0.0) throw std::invalid_argument("service_pdf: s must be >= 0");
    if (!(mu > 0.0)) throw std::invalid_argument("service_pdf: mu must be > 0");
    return mu * std::exp(-mu * s_s);
}

double expected_wait(const QueueParams& params) {
    if (params.arrival_rate < 0.0) {
        throw std::invalid_argument("expected_wait: lambda must be >= 0");
    }
    if (!(params.service_rate > 0.0)) {
        throw std::invalid_argument("expected_wait: mu must be > 0");
    }
    if (!params.stable()) {
        throw instability_error("expected_wait: unstable queue (lambda=" +
                                std::to_string(params.arrival_rate) +
                                " >= mu=" + std::to_string(params.service_rate) + ")");
    }
    return 1.0 / (params.service_rate - params.arrival_rate);
}

double propagation_delay_us(double distance_km, double speed_km_s) {
    if (distance_km < 0.0) throw std::invalid_argument("propagation_delay: distance must be >= 0");
    if (!(speed_km_s > 0.0)) throw std::invalid_argument("propagation_delay: speed must be > 0");
    return distance_km / speed_km_s * 1e6;
}

double total_latency_us(const LatencyBreakdown& b) {
    return b.transmission_us + b.service_us + b.propagation_us;
}

double throughput_bound_bps(const ThroughputInputs& in) {
    if (!(in.receive_window_bytes > 0.0)) {
        throw std::invalid_argument("throughput_bound: receive window must be > 0");
    }
    if (!(in.rtt_us > 0.0)) {
        throw std::invalid_argument("throughput_bound: RTT must be > 0");
    }
    return in.receive_window_bytes * 8.0 / (in.rtt_us / 1e6);
}

double transmission_time_us(double size_bytes, double bandwidth_bps) {
    if (!(size_bytes > 0.0)) throw std::invalid_argument("transmission_time: size must be > 0");
    if (!(bandwidth_bps > 0.0)) throw std::invalid_argument("transmission_time: bandwidth must be > 0");
    return size_bytes * 8.0 / bandwidth_bps * 1e6;
}

} // namespace sgsim::queueing
