#ifndef SGSIM_QUEUEING_HPP
#define SGSIM_QUEUEING_HPP

#include <stdexcept>

namespace sgsim::queueing {

// Single-server queue parameters. Rates are in base SI units (per second);
// conversions to microseconds happen at call boundaries, never inside.
struct QueueParams {
    double arrival_rate = 0.0; // lambda, packets/s
    double service_rate = 1.0; // mu, packets/s
    int servers = 1;           // fixed at 1

    bool stable() const { return arrival_rate < service_rate; }
};

struct LatencyBreakdown {
    double transmission_us = 0.0;
    double service_us = 0.0;
    double propagation_us = 0.0;
};

struct ThroughputInputs {
    double receive_window_bytes = 0.0;
    double rtt_us = 0.0;
};

// An unstable queue (lambda >= mu) has no finite expected wait. The DoS
// scenario drives queues unstable on purpose, so this is a first-class error
// distinct from any numeric overflow.
class instability_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Interarrival density lambda * exp(-lambda * t), t in seconds.
double interarrival_pdf(double t_s, double lambda);

// Mean interarrival time 1/lambda, seconds.
double mean_iat(double lambda);

// Service-time density mu * exp(-mu * s), s in seconds.
double service_pdf(double s_s, double mu);

// Mean sojourn time 1/(mu - lambda), seconds. Throws instability_error when
// lambda >= mu.
double expected_wait(const QueueParams& params);

// Propagation delay of a link: distance / speed, returned in microseconds.
double propagation_delay_us(double distance_km, double speed_km_s);

// Total latency: transmission + service + propagation, microseconds.
double total_latency_us(const LatencyBreakdown& b);

// Receive-window throughput ceiling: RW * 8 / RTT, bits per second.
double throughput_bound_bps(const ThroughputInputs& in);

// Wire time of one frame: size * 8 / bandwidth, in microseconds.
double transmission_time_us(double size_bytes, double bandwidth_bps);

} // namespace sgsim::queueing

#endif
