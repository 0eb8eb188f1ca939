#ifndef SGSIM_SIM_TIME_HPP
#define SGSIM_SIM_TIME_HPP

#include <cmath>
#include <cstdint>

namespace sgsim {

// Simulation clock: integer microsecond ticks. Analytic quantities stay in
// real arithmetic; only event scheduling is quantized.
using SimTime = std::int64_t;

constexpr SimTime kTicksPerSecond = 1'000'000;

inline SimTime ticks_from_seconds(double s) { return std::llround(s * 1e6); }
inline SimTime ticks_from_us(double us) { return std::llround(us); }
inline double seconds_from_ticks(SimTime t) { return static_cast<double>(t) / 1e6; }
inline double us_from_ticks(SimTime t) { return static_cast<double>(t); }

} // namespace sgsim

#endif
