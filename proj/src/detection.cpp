#include "qnet/detection.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qnet/error.hpp"
#include "qnet/random.hpp"

namespace qnet {

void DetectorSpec::validate() const {
    for (const auto& b : bands) {
        require(b.efficiency >= 0.0 && b.efficiency <= 1.0, "efficiency must be in [0, 1]", "bands");
        require(b.hi_nm > b.lo_nm, "band must have hi > lo", "bands");
    }
    require(dead_time_ns >= 0.0, "must be >= 0", "dead_time_ns");
    require(dark_rate_cps >= 0.0, "must be >= 0", "dark_rate_cps");
    require(jitter_ps >= 0.0, "must be >= 0", "jitter_ps");
}

std::optional<double> DetectorSpec::efficiency_at(double wavelength_nm) const {
    for (const auto& b : bands)
        if (wavelength_nm >= b.lo_nm && wavelength_nm <= b.hi_nm) return b.efficiency;
    return std::nullopt;
}

DetectorSpec DetectorSpec::si_apd() { return {{{700.0, 1000.0, 0.60}}, 1000.0, 1000.0, 130.0}; }

DetectorSpec DetectorSpec::snspd() {
    return {{{700.0, 1000.0, 0.06}, {1400.0, 1700.0, 0.75}}, 1000.0, 1000.0, 130.0};
}

DetectorSpec DetectorSpec::ideal() { return {{{700.0, 1700.0, 1.0}}, 0.0, 0.0, 0.0}; }

std::vector<TimeTag> detect(std::span<const Photon> arrivals, const DetectorSpec& det, Picoseconds duration_ps,
                            std::uint32_t detector_id, std::uint64_t seed) {
    det.validate();
    require(duration_ps >= 0, "duration must be >= 0");
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> jitter(0.0, det.jitter_ps > 0.0 ? det.jitter_ps : 1.0);

    std::vector<TimeTag> tags;
    for (const Photon& p : arrivals) {
        const auto eta = det.efficiency_at(p.wavelength_nm);
        require(eta.has_value(), "arrival at " + std::to_string(p.wavelength_nm) + " nm is outside every detector band");
        if (unit(rng) >= *eta) continue;
        double t = static_cast<double>(p.time_ps);
        if (det.jitter_ps > 0.0) t += jitter(rng);
        const auto ti = static_cast<Picoseconds>(std::llround(t));
        if (ti < 0 || ti >= duration_ps) continue;
        tags.push_back({ti, detector_id, static_cast<std::uint16_t>(p.channel)});
    }

    if (det.dark_rate_cps > 0.0 && duration_ps > 0) {
        std::poisson_distribution<std::int64_t> n_dark(det.dark_rate_cps * duration_ps / units::kPsPerSecond);
        std::uniform_int_distribution<Picoseconds> when(0, duration_ps - 1);
        const std::int64_t n = n_dark(rng);
        for (std::int64_t k = 0; k < n; ++k) tags.push_back({when(rng), detector_id, std::nullopt});
    }

    // Ties resolved by truth label so the order is a function of the tag set.
    std::sort(tags.begin(), tags.end(), [](const TimeTag& a, const TimeTag& b) {
        if (a.time_ps != b.time_ps) return a.time_ps < b.time_ps;
        return a.truth_channel.value_or(0xFFFF) < b.truth_channel.value_or(0xFFFF);
    });
    if (det.dead_time_ns > 0.0) return apply_dead_time(tags, det.dead_time_ns);
    return tags;
}

std::vector<TimeTag> apply_dead_time(std::span<const TimeTag> tags, double dead_time_ns) {
    require(dead_time_ns >= 0.0, "dead time must be >= 0");
    const auto dead_ps = static_cast<Picoseconds>(std::llround(dead_time_ns * units::kPsPerNs));
    std::vector<TimeTag> out;
    out.reserve(tags.size());
    for (std::size_t i = 0; i < tags.size(); ++i) {
        require(i == 0 || tags[i].time_ps >= tags[i - 1].time_ps, "tags must be sorted by time");
        if (out.empty() || tags[i].time_ps - out.back().time_ps >= dead_ps) out.push_back(tags[i]);
    }
    return out;
}

}  // namespace qnet
