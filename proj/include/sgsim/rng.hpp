#ifndef SGSIM_RNG_HPP
#define SGSIM_RNG_HPP

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace sgsim {

// Named, independently seeded random stream. Each stochastic component owns
// its own stream so adding a component never perturbs another component's
// draw sequence. Samplers are hand-rolled (inverse CDF, Box-Muller) on top of
// mt19937_64 so that identical (seed, stream_id, draw index) gives identical
// output on every platform.
class RandomStream {
public:
    RandomStream(std::string_view stream_id, std::uint64_t seed);

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01();

    // Exp(rate) draw; mean 1/rate. Throws std::invalid_argument for rate <= 0.
    double exponential(double rate);

    // N(mean, stddev^2) draw. Throws std::invalid_argument for stddev < 0.
    // Always consumes exactly two uniforms, including the degenerate
    // stddev == 0 case, so draw counts stay aligned across configurations.
    double gaussian(double mean, double stddev);

    const std::string& id() const { return id_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t draw_count() const { return draws_; }

private:
    std::string id_;
    std::uint64_t seed_;
    std::mt19937_64 gen_;
    std::uint64_t draws_ = 0;
};

} // namespace sgsim

#endif
