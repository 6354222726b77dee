#include <doctest.h>

#include <cmath>
#include <random>

#include "qnet/error.hpp"
#include "qnet/metrics.hpp"

using namespace qnet;

TEST_CASE("analytic CAR") {
    CHECK(analytic_car(1.0, 0.5, 0.5, 0.5, 0.5) == 2.0);
    CHECK(analytic_car(0.0, 0.1, 0.1, 0.01, 0.01) == 1.0);
    // mu_c = 7.8e6 /s at 80 MHz, alpha = 0.1 per arm, singles mu_c * alpha.
    const double mu = 7.8e6 / 80e6;
    const double c = mu * 0.1;
    CHECK(analytic_car(mu, 0.1, 0.1, c, c) == doctest::Approx(1 + 1 / mu).epsilon(1e-14));
    CHECK_THROWS_AS(analytic_car(1, 1, 1, 0, 1), ValidationError);
}

TEST_CASE("(CAR - 1) scales as 1 / P for dark-free singles") {
    const double b = 0.0975;  // pairs per pulse per mW
    double prev_log = 0;
    for (int k = 0; k <= 4; ++k) {
        const double p = std::pow(10.0, k - 2.0);
        const double mu = b * p;
        const double car = analytic_car(mu, 0.05, 0.02, mu * 0.05, mu * 0.02);
        const double lg = std::log10(car - 1);
        if (k > 0) CHECK(lg - prev_log == doctest::Approx(-1.0).epsilon(1e-6));
        prev_log = lg;
    }
}

TEST_CASE("multiplexing law") {
    CHECK(mux_car(7.3, 1) == 7.3);
    CHECK(mux_car(2, 4) == 5);
    for (double c : {1.0, 1.5, 2.0, 11.0, 123.456})
        for (int n = 1; n <= 8; ++n) CHECK(mux_car(c, n) - 1 == n * (c - 1));
    // Ground pair with a cross-talk penalty of 1.91 / 2.
    const double c1 = 3.0;
    CHECK(1 + (mux_car(c1, 2) - 1) * 1.91 / 2 == doctest::Approx(1 + 1.91 * (c1 - 1)));
    CHECK_THROWS_AS(mux_car(0.5, 2), ValidationError);
    CHECK_THROWS_AS(mux_car(2, 0), ValidationError);
}

TEST_CASE("visibility") {
    CHECK(visibility(2).value == 0.0);
    CHECK(visibility(11).value == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(visibility(1e9).value > 1 - 1e-8);
    CHECK(visibility(INFINITY).value == 1.0);
    const Visibility low = visibility(1.5);
    CHECK(low.value == 0.0);
    CHECK(low.clamped);
    CHECK_THROWS_AS(visibility(1.0), ValidationError);
}

TEST_CASE("qber and entropy") {
    CHECK(qber(1) == 0);
    CHECK(qber(0) == 0.5);
    CHECK(qber(0.9) == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(binary_entropy(0.5) == 1.0);
    CHECK(binary_entropy(0) == 0.0);
    CHECK(binary_entropy(1) == 0.0);
    // -0.11 log2 0.11 - 0.89 log2 0.89
    CHECK(binary_entropy(0.11) == doctest::Approx(0.4999157).epsilon(1e-6));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 10000; ++i) {
        const double x = u(rng);
        REQUIRE(binary_entropy(x) == doctest::Approx(binary_entropy(1 - x)).epsilon(1e-12));
    }
}

TEST_CASE("qber(visibility(car)) decreases with car above 2") {
    double prev = 1;
    for (double car = 2.01; car < 1000; car *= 1.3) {
        const double q = qber(visibility(car).value);
        CHECK(q < prev);
        prev = q;
    }
}

TEST_CASE("key rate") {
    const QkdParams p;
    CHECK(skr(p, 1e-3, 0).raw == doctest::Approx(0.5e-3));
    const KeyRate half = skr(p, 1e-3, 0.5);
    CHECK(half.raw == doctest::Approx(0.5e-3 * (1 - 2.11)));
    CHECK(half.clamped == 0.0);
    double prev = INFINITY;
    for (double q = 0; q <= 0.5; q += 0.01) {
        const double r = skr(p, 1e-3, q).raw;
        CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("zero-rate threshold") {
    // Bisection on 1 = 2.11 H2(Q) in (0, 0.5).
    double lo = 1e-9, hi = 0.5;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (2.11 * binary_entropy(mid) < 1 ? lo : hi) = mid;
    }
    CHECK(std::abs(lo - 0.1016) <= 0.0005);
    CHECK(skr({}, 1, lo - 1e-6).raw > 0);
    CHECK(skr({}, 1, lo + 1e-6).raw < 0);
}

TEST_CASE("full chain from a CarResult") {
    const CarResult flat = finalize_car(80, 320, 8);  // CAR 2
    const MetricsRecord m = metrics_from_car(flat, 1e6, 80e6);
    CHECK(m.car == 2.0);
    CHECK(m.visibility == 0.0);
    CHECK(m.qber == 0.5);
    CHECK(m.skr_per_pulse == 0.0);
    CHECK(m.skr_raw_per_pulse < 0.0);
    CHECK(m.gain == 80e-6);

    const MetricsRecord inf = metrics_from_car(finalize_car(10, 0, 8), 1e6, 80e6);
    CHECK(inf.car_flag == CarFlag::Infinite);
    CHECK(inf.visibility == 1.0);
    CHECK(inf.skr_per_second == doctest::Approx(0.5 * 1e-5 * 80e6));

    const MetricsRecord none = metrics_from_car(finalize_car(0, 0, 8), 1e6, 80e6);
    CHECK(none.car_flag == CarFlag::Undefined);
    CHECK(std::isnan(none.qber));
    CHECK(none.skr_per_second == 0.0);
}
