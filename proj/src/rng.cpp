#include "sgsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace sgsim {

namespace {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x00000100000001b3ull;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

RandomStream::RandomStream(std::string_view stream_id, std::uint64_t seed)
    : id_(stream_id),
      seed_(seed),
      gen_(splitmix64(seed ^ fnv1a64(stream_id))) {}

double RandomStream::uniform01() {
    ++draws_;
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RandomStream::exponential(double rate) {
    if (!(rate > 0.0)) {
        throw std::invalid_argument("RandomStream::exponential: rate must be > 0");
    }
    // u in [0,1), so -log1p(-u) is finite and positive-or-zero.
    return -std::log1p(-uniform01()) / rate;
}

double RandomStream::gaussian(double mean, double stddev) {
    if (stddev < 0.0) {
        throw std::invalid_argument("RandomStream::gaussian: stddev must be >= 0");
    }
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 < 1e-300) u1 = 1e-300;
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return mean + z * stddev;
}

} // namespace sgsim
