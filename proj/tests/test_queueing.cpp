#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "sgsim/queueing.hpp"

using namespace sgsim::queueing;

TEST_CASE("interarrival pdf basics") {
    CHECK(interarrival_pdf(0.0, 2.0) == 2.0);
    CHECK(interarrival_pdf(1.0, 1.0) == doctest::Approx(0.36787944117144233).epsilon(1e-12));
    CHECK_THROWS_AS(interarrival_pdf(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(interarrival_pdf(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("mean interarrival time") {
    CHECK(mean_iat(1.0) == 1.0);
    // four packets every four seconds averages one packet per second
    CHECK(mean_iat(4.0 / 4.0) == 1.0);
    CHECK_THROWS_AS(mean_iat(0.0), std::invalid_argument);
    CHECK_THROWS_AS(mean_iat(-2.0), std::invalid_argument);
}

TEST_CASE("service pdf basics") {
    CHECK(service_pdf(0.0, 3.0) == 3.0);
    CHECK(service_pdf(1.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(service_pdf(0.5, 2.0) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(service_pdf(-0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(service_pdf(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("expected wait") {
    CHECK(expected_wait({0.0, 2.0, 1}) == 0.5);
    CHECK(expected_wait({0.8, 1.0, 1}) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK_THROWS_AS(expected_wait({1.0, 1.0, 1}), instability_error);
    CHECK_THROWS_AS(expected_wait({2.0, 1.0, 1}), instability_error);
}

TEST_CASE("propagation delay") {
    CHECK(propagation_delay_us(40.6614, 200000.0) == doctest::Approx(203.307).epsilon(1e-12));
    CHECK(propagation_delay_us(0.0, 200000.0) == 0.0);
    CHECK(propagation_delay_us(200000.0, 200000.0) == doctest::Approx(1e6).epsilon(1e-12));
    CHECK_THROWS_AS(propagation_delay_us(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("propagation delay scales linearly in d and inversely in s, exactly") {
    for (double d : {0.5, 12.0, 40.6614, 999.0}) {
        for (double s : {1000.0, 200000.0, 299792.458}) {
            CHECK(propagation_delay_us(2.0 * d, s) == 2.0 * propagation_delay_us(d, s));
            CHECK(propagation_delay_us(d, 2.0 * s) == propagation_delay_us(d, s) / 2.0);
        }
    }
}

TEST_CASE("total latency is the plain sum") {
    CHECK(total_latency_us({100.0, 50.0, 203.307}) == doctest::Approx(353.307).epsilon(1e-12));
    CHECK(total_latency_us({0.0, 0.0, 0.0}) == 0.0);
    // composition: a 5 s expected wait plus the average propagation delay
    const double w_us = expected_wait({0.8, 1.0, 1}) * 1e6;
    CHECK(total_latency_us({w_us, 0.0, 203.307}) ==
          doctest::Approx(5'000'203.307).epsilon(1e-12));
}

TEST_CASE("throughput bound") {
    CHECK(throughput_bound_bps({65535.0, 10'000.0}) == doctest::Approx(52'428'000.0).epsilon(1e-12));
    CHECK(throughput_bound_bps({1.0, 1e6}) == doctest::Approx(8.0).epsilon(1e-12));
    // receive window over the doubled one-way latency of the fast echo path
    CHECK(throughput_bound_bps({65535.0, 2 * 28.727}) ==
          doctest::Approx(9.1252e9).epsilon(1e-4));
    CHECK_THROWS_AS(throughput_bound_bps({0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(throughput_bound_bps({1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("transmission time helper") {
    CHECK(transmission_time_us(1500, 20e9) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(transmission_time_us(1500, 20e6) == doctest::Approx(600.0).epsilon(1e-12));
}

TEST_CASE("formula grid matches long-double evaluation to 1e-9 relative") {
    int points = 0;
    for (double rate : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        for (double x : {0.0, 0.1, 0.5, 1.0, 2.0, 3.5, 7.0}) {
            const long double want = oracles::exp_pdf_ld(rate, x);
            CHECK(std::abs(interarrival_pdf(x, rate) - static_cast<double>(want)) <=
                  1e-9 * static_cast<double>(want));
            CHECK(std::abs(service_pdf(x, rate) - static_cast<double>(want)) <=
                  1e-9 * static_cast<double>(want));
            points += 2;
        }
    }
    for (double d : {0.1, 1.0, 40.6614, 500.0, 20000.0}) {
        for (double s : {1000.0, 200000.0, 299792.458}) {
            const long double want = oracles::prop_delay_us_ld(d, s);
            CHECK(std::abs(propagation_delay_us(d, s) - static_cast<double>(want)) <=
                  1e-9 * static_cast<double>(want));
            ++points;
        }
    }
    for (double rw : {64.0, 1500.0, 65535.0}) {
        for (double rtt : {1.0, 57.454, 10'000.0, 1e6}) {
            const long double want = oracles::throughput_bound_bps_ld(rw, rtt);
            CHECK(std::abs(throughput_bound_bps({rw, rtt}) - static_cast<double>(want)) <=
                  1e-9 * static_cast<double>(want));
            ++points;
        }
    }
    CHECK(points >= 100);
}

TEST_CASE("interarrival pdf integrates to one") {
    for (double lambda : {0.5, 1.0, 4.0}) {
        const double upper = 40.0 / lambda;
        const double integral = oracles::simpson(
            [lambda](double t) { return interarrival_pdf(t, lambda); }, 0.0, upper, 20000);
        CHECK(std::abs(integral - 1.0) < 1e-6);
    }
}
