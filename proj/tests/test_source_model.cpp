#include <doctest.h>

#include <cmath>
#include <limits>

#include "qnet/error.hpp"
#include "qnet/source_model.hpp"

using namespace qnet;

TEST_CASE("mean pairs per pulse") {
    SourceSpec s;
    CHECK(mean_pairs_per_pulse(s) == doctest::Approx(0.0975).epsilon(1e-12));
    s.pump_power_mw = 0.0;
    CHECK(mean_pairs_per_pulse(s) == 0.0);
    s.brightness = 8e7;
    s.pump_power_mw = 1.0;
    CHECK(mean_pairs_per_pulse(s) == 1.0);
}

TEST_CASE("pulse period") {
    SourceSpec s;
    CHECK(pulse_period_ps(s) == 12500);
    s.rep_rate_hz = 0;
    CHECK_THROWS_AS(pulse_period_ps(s), ValidationError);
}

TEST_CASE("validation names the offending field") {
    SourceSpec s;
    s.pump_power_mw = -1;
    try {
        s.validate();
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.path() == "source.pump_power_mw");
    }
    s = {};
    s.crosstalk_db = 3;
    CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("no pump, no pairs") {
    SourceSpec s;
    s.pump_power_mw = 0;
    CHECK(sample_pairs(s, 1000000, 1).empty());
}

TEST_CASE("pair count is Poisson around mu * n_pulses") {
    SourceSpec s;
    s.brightness = 8e7;
    s.pump_power_mw = 0.1;  // mu = 0.1
    const auto ev = sample_pairs(s, 1000000, 99);
    CHECK(std::abs(static_cast<double>(ev.size()) - 1e5) < 3.0 * std::sqrt(1e5));
}

TEST_CASE("sampling is reproducible and sorted") {
    SourceSpec s;
    s.pump_power_mw = 1.0;
    const auto a = sample_pairs(s, 100000, 5);
    const auto b = sample_pairs(s, 100000, 5);
    CHECK(a == b);
    CHECK(a != sample_pairs(s, 100000, 6));
    for (std::size_t i = 1; i < a.size(); ++i) {
        const bool ordered = a[i - 1].pulse_index < a[i].pulse_index ||
                             (a[i - 1].pulse_index == a[i].pulse_index && a[i - 1].channel_index <= a[i].channel_index);
        REQUIRE(ordered);
    }
    for (const auto& e : a) REQUIRE(e.emission_time_ps == e.pulse_index * 12500);
}

TEST_CASE("first_pulse offsets the block") {
    SourceSpec s;
    s.pump_power_mw = 1.0;
    const auto a = sample_pairs(s, 1000, 5, 0);
    const auto b = sample_pairs(s, 1000, 5, 5000);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i].pulse_index == a[i].pulse_index + 5000);
}

TEST_CASE("per-channel rate is mu / N for N = 1..8") {
    for (int n = 1; n <= 8; ++n) {
        SourceSpec s;
        s.brightness = 8e7;
        s.pump_power_mw = 0.5;  // mu = 0.5
        s.n_channels = n;
        const std::int64_t pulses = 400000;
        const auto ev = sample_pairs(s, pulses, 1000 + n);
        std::vector<double> count(n, 0.0);
        for (const auto& e : ev) count[e.channel_index] += 1;
        const double expect = 0.5 / n * pulses;
        for (int c = 0; c < n; ++c) CHECK(std::abs(count[c] - expect) < 3.5 * std::sqrt(expect));
    }
}

TEST_CASE("cross-talk reassigns idlers to neighbours only") {
    SourceSpec s;
    s.brightness = 8e7;
    s.pump_power_mw = 1.0;
    s.n_channels = 4;
    s.crosstalk_db = -10.0;  // p = 0.1 per neighbour
    const auto ev = sample_pairs(s, 400000, 3);
    std::vector<double> total(4, 0.0), moved(4, 0.0);
    for (const auto& e : ev) {
        REQUIRE(std::abs(e.idler_channel - e.channel_index) <= 1);
        total[e.channel_index] += 1;
        if (e.idler_channel != e.channel_index) moved[e.channel_index] += 1;
    }
    // Edge channels have one neighbour (p), inner channels two (2p).
    for (int c = 0; c < 4; ++c) {
        const double p = (c == 0 || c == 3) ? 0.1 : 0.2;
        const double sigma = std::sqrt(total[c] * p * (1 - p));
        CHECK(std::abs(moved[c] - p * total[c]) < 4 * sigma);
    }
    s.crosstalk_db = -std::numeric_limits<double>::infinity();
    for (const auto& e : sample_pairs(s, 10000, 3)) CHECK(e.idler_channel == e.channel_index);
}

TEST_CASE("pump channel layout is centred") {
    const auto ch = layout_pump_channels(521.4, 4, 0.25, 0.25);
    REQUIRE(ch.size() == 4);
    CHECK(ch[0].center_nm == doctest::Approx(520.65));
    CHECK(ch[3].center_nm == doctest::Approx(522.15));
    CHECK(ch[1].center_nm - ch[0].center_nm == doctest::Approx(0.5));
    CHECK_THROWS_AS(layout_pump_channels(521.4, 0, 0.25, 0.25), ValidationError);
}
