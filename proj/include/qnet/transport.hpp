#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qnet/units.hpp"

namespace qnet {

struct ChannelSpec {
    double loss_db = 0.0;
    double propagation_delay_ps = 0.0;
    double extra_jitter_ps = 0.0;  // RMS, e.g. turbulence
    // Delay added per channel index (grating spacing of an FTM unit); 0 if none.
    double ftm_delay_ps = 0.0;

    void validate() const;
};

struct FtmSpec {
    int n_gratings = 4;
    double segment_length_m = 0.35;
    double group_index = 1.468;
    double circulator_loss_db = 3.0;
    double array_loss_db = 7.0;

    void validate() const;
};

// A single photon on its way to a detector.
struct Photon {
    Picoseconds time_ps = 0;
    int channel = 0;
    double wavelength_nm = 0.0;
};

// 10^(-loss/10).
double db_to_transmittance(double loss_db);

// Round-trip delay of grating `channel_index` relative to grating 0, in ps.
double ftm_delay(int channel_index, const FtmSpec& ftm);

// Bernoulli thinning plus delay and Gaussian jitter; survivors keep input order.
std::vector<Photon> propagate(std::span<const Photon> photons, const ChannelSpec& ch, std::uint64_t seed);

}  // namespace qnet
