#include <doctest.h>

#include <cmath>

#include "qnet/detection.hpp"
#include "qnet/error.hpp"

using namespace qnet;

namespace {

std::vector<Photon> arrivals(std::size_t n, Picoseconds period, double nm) {
    std::vector<Photon> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = {static_cast<Picoseconds>(i) * period + 100, 0, nm};
    return v;
}

}  // namespace

TEST_CASE("ideal detector reproduces the arrivals") {
    const auto in = arrivals(1000, 12500, 1550);
    const auto tags = detect(in, DetectorSpec::ideal(), 1000 * 12500, 3, 1);
    REQUIRE(tags.size() == in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        CHECK(tags[i].time_ps == in[i].time_ps);
        CHECK(tags[i].detector_id == 3);
        CHECK(tags[i].truth_channel == 0);
    }
}

TEST_CASE("dark counts alone") {
    DetectorSpec d = DetectorSpec::ideal();
    d.dark_rate_cps = 1000;
    const auto tags = detect({}, d, 1'000'000'000'000, 0, 5);
    CHECK(std::abs(static_cast<double>(tags.size()) - 1000.0) < 3 * std::sqrt(1000.0));
    for (const auto& t : tags) CHECK(!t.truth_channel);
}

TEST_CASE("SNSPD band efficiencies") {
    const DetectorSpec d = DetectorSpec::snspd();
    CHECK(d.efficiency_at(1550) == 0.75);
    CHECK(d.efficiency_at(785) == 0.06);
    CHECK(!d.efficiency_at(1200));
    DetectorSpec quiet = d;
    quiet.dark_rate_cps = 0;
    quiet.dead_time_ns = 0;
    quiet.jitter_ps = 0;
    const std::size_t n = 200000;
    auto mixed = arrivals(n, 20000, 1550);
    auto red = arrivals(n, 20000, 785);
    for (auto& p : red) p.time_ps += 10000;
    mixed.insert(mixed.end(), red.begin(), red.end());
    const auto tags = detect(mixed, quiet, static_cast<Picoseconds>(n) * 20000, 0, 2);
    double ir = 0, vis = 0;
    for (const auto& t : tags) ((t.time_ps % 20000) == 100 ? ir : vis) += 1;
    CHECK(std::abs(ir / n - 0.75) < 3 * std::sqrt(0.75 * 0.25 / n));
    CHECK(std::abs(vis / n - 0.06) < 3 * std::sqrt(0.06 * 0.94 / n));
}

TEST_CASE("arrivals outside every band are rejected") {
    CHECK_THROWS_AS(detect(arrivals(1, 10, 1200), DetectorSpec::snspd(), 100, 0, 1), ValidationError);
}

TEST_CASE("zero efficiency and no darks gives nothing") {
    DetectorSpec d;
    d.bands = {{700, 1700, 0.0}};
    CHECK(detect(arrivals(1000, 100, 1550), d, 100000, 0, 1).empty());
}

TEST_CASE("higher efficiency never gives fewer tags on average") {
    double prev = -1;
    for (double eta : {0.1, 0.3, 0.6, 0.9}) {
        DetectorSpec d;
        d.bands = {{700, 1700, eta}};
        const double n = static_cast<double>(detect(arrivals(50000, 100, 1550), d, 5000000, 0, 7).size());
        CHECK(n > prev);
        prev = n;
    }
}

TEST_CASE("dead time basics") {
    std::vector<TimeTag> spread{{0, 0, {}}, {2'000'000, 0, {}}, {5'000'000, 0, {}}};
    CHECK(apply_dead_time(spread, 1000) == spread);
    std::vector<TimeTag> close{{0, 0, {}}, {500'000, 0, {}}};
    CHECK(apply_dead_time(close, 1000).size() == 1);
    std::vector<TimeTag> unsorted{{5, 0, {}}, {1, 0, {}}};
    CHECK_THROWS_AS(apply_dead_time(unsorted, 1), ValidationError);
}

TEST_CASE("non-paralyzable dead time: r / (1 + r tau), capped at 1 / tau, idempotent") {
    DetectorSpec d = DetectorSpec::ideal();
    d.dark_rate_cps = 2e6;
    const auto raw = detect({}, d, 100'000'000'000, 0, 11);  // 0.1 s
    const double r = static_cast<double>(raw.size()) / 0.1;
    const double tau = 1e-6;
    const auto out = apply_dead_time(raw, 1000);
    const double r_out = static_cast<double>(out.size()) / 0.1;
    CHECK(r_out == doctest::Approx(r / (1 + r * tau)).epsilon(0.05));
    CHECK(r_out <= 1 / tau);
    CHECK(apply_dead_time(out, 1000) == out);
}

TEST_CASE("presets") {
    const auto si = DetectorSpec::si_apd();
    CHECK(si.efficiency_at(785) == 0.6);
    CHECK(si.dead_time_ns == 1000);
    CHECK(si.dark_rate_cps == 1000);
    CHECK(si.jitter_ps == 130);
    DetectorSpec bad = DetectorSpec::ideal();
    bad.bands[0].efficiency = 1.5;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}
