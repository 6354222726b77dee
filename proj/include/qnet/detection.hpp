#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qnet/transport.hpp"
#include "qnet/units.hpp"

namespace qnet {

struct EfficiencyBand {
    double lo_nm = 0.0;
    double hi_nm = 0.0;
    double efficiency = 0.0;
};

struct DetectorSpec {
    std::vector<EfficiencyBand> bands;
    double dead_time_ns = 0.0;
    double dark_rate_cps = 0.0;
    double jitter_ps = 0.0;  // RMS

    void validate() const;
    // Efficiency at `wavelength_nm`; nullopt outside every band.
    std::optional<double> efficiency_at(double wavelength_nm) const;

    // Si-APD: 60 % around 780 nm.
    static DetectorSpec si_apd();
    // SNSPD: 75 % at 1550 nm, 6 % at 780 nm.
    static DetectorSpec snspd();
    // Unit efficiency over 700-1700 nm, no noise, no dead time, no jitter.
    static DetectorSpec ideal();
};

struct TimeTag {
    Picoseconds time_ps = 0;
    std::uint32_t detector_id = 0;
    std::optional<std::uint16_t> truth_channel;  // absent for dark counts

    friend bool operator==(const TimeTag&, const TimeTag&) = default;
};

// Efficiency thinning and Gaussian jitter, then Poisson dark counts over
// [0, duration_ps) and the dead-time filter. Output sorted by time. Tags
// jittered outside [0, duration_ps) are dropped.
std::vector<TimeTag> detect(std::span<const Photon> arrivals, const DetectorSpec& det, Picoseconds duration_ps,
                            std::uint32_t detector_id, std::uint64_t seed);

// Non-paralyzable: a tag survives iff it lies at least `dead_time_ns` after the
// previous surviving tag. Input must be sorted.
std::vector<TimeTag> apply_dead_time(std::span<const TimeTag> tags, double dead_time_ns);

}  // namespace qnet
