#include "sgsim/controlplane.hpp"

namespace sgsim {

const char* to_string(ClusterMode mode) {
    return mode == ClusterMode::Centralized ? "centralized" : "distributed3";
}

ClusterMode cluster_mode_from_string(const std::string& s) {
    if (s == "centralized") return ClusterMode::Centralized;
    if (s == "distributed3") return ClusterMode::DistributedFlat;
    throw std::invalid_argument("unknown cluster mode '" + s + "'");
}

std::vector<int> assign_mastership(int switch_count, const std::vector<int>& up_controllers) {
    std::vector<int> master(switch_count, -1);
    if (up_controllers.empty()) return master;
    const int k = static_cast<int>(up_controllers.size());
    const int base = switch_count / k;
    const int rem = switch_count % k;
    int sw = 0;
    for (int i = 0; i < k; ++i) {
        const int take = base + (i < rem ? 1 : 0);
        for (int j = 0; j < take; ++j) master[sw++] = up_controllers[i];
    }
    return master;
}

double controller_capacity_per_s(const ControllerParams& params, int owned_switches) {
    const double service_us = params.s0_us * (1.0 + params.alpha * owned_switches);
    return 1e6 / service_us;
}

} // namespace sgsim
