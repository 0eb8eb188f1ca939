#ifndef SGSIM_CONTROLPLANE_HPP
#define SGSIM_CONTROLPLANE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgsim {

enum class ClusterMode { Centralized, DistributedFlat };

const char* to_string(ClusterMode mode);
ClusterMode cluster_mode_from_string(const std::string& s);

// Controller service model: a packet-in costs s0 * (1 + alpha * owned), so
// capacity falls as a controller masters more switches. s0/alpha are declared
// calibration constants, not measurements of any real controller.
struct ControllerParams {
    double s0_us = 10.0;
    double alpha = 0.02;
};

struct ClusterConfig {
    ClusterMode mode = ClusterMode::DistributedFlat;
    ControllerParams centralized{300.0, 0.05}; // POX-like
    ControllerParams distributed{10.0, 0.02};  // ONOS-like
    double sync_delay_us = 1000.0;
    double failure_detection_timeout_s = 0.5;
    int inbox_capacity = 5400;
    double control_link_bandwidth_bps = 20e6;
    double control_link_prop_us = 203.307;

    int controller_count() const { return mode == ClusterMode::Centralized ? 1 : 3; }
    const ControllerParams& params() const {
        return mode == ClusterMode::Centralized ? centralized : distributed;
    }
};

// Contiguous balanced partition of switches 1..switch_count across the Up
// controllers in ascending id order; cluster sizes differ by at most one.
// Returns master controller id (0-based) per switch, or -1 everywhere when no
// controller is up (total outage: the run continues with packet-ins dropping).
std::vector<int> assign_mastership(int switch_count, const std::vector<int>& up_controllers);

// Sustainable packet-ins per second for a controller owning `owned_switches`.
double controller_capacity_per_s(const ControllerParams& params, int owned_switches);

} // namespace sgsim

#endif
