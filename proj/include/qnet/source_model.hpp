#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "qnet/units.hpp"

namespace qnet {

// Pulsed broadband SPDC pair source.
struct SourceSpec {
    double brightness = 7.8e7;      // pairs / s / mW
    double pump_power_mw = 0.1;
    double rep_rate_hz = 80e6;
    int n_channels = 4;
    double signal_center_nm = 787.5;
    double idler_center_nm = 1543.2;
    // Power leaked into each adjacent channel; -inf disables cross-talk.
    double crosstalk_db = -std::numeric_limits<double>::infinity();

    void validate() const;
    // Correlated pair rate mu_c in pairs/s.
    double pair_rate() const { return brightness * pump_power_mw; }
};

// round(1e12 / rep_rate) ps.
Picoseconds pulse_period_ps(const SourceSpec& src);

// Total mean pairs per pulse over all channels.
double mean_pairs_per_pulse(const SourceSpec& src);

struct PairEvent {
    std::int64_t pulse_index = 0;
    int channel_index = 0;        // signal channel
    int idler_channel = 0;        // differs from channel_index only after cross-talk
    Picoseconds emission_time_ps = 0;

    friend bool operator==(const PairEvent&, const PairEvent&) = default;
};

// Poisson pair numbers per pulse and channel (mean mu / n_channels), sorted by
// (pulse, channel). `first_pulse` offsets pulse indices so long runs can be
// generated block by block.
std::vector<PairEvent> sample_pairs(const SourceSpec& src, std::int64_t n_pulses, std::uint64_t seed,
                                    std::int64_t first_pulse = 0);

// --- joint spectral intensity -------------------------------------------------

struct PumpChannel {
    double center_nm = 0.0;
    double width_nm = 0.0;
};

// n channels of `width_nm` separated by `gap_nm`, centred on `center_nm`.
std::vector<PumpChannel> layout_pump_channels(double center_nm, int n, double width_nm, double gap_nm);

struct JsiSpec {
    std::vector<PumpChannel> pump_channels;
    double signal_center_nm = 787.5;
    double idler_center_nm = 1543.2;
    // RMS width of the phase-matching intensity in the signal-idler frequency
    // difference, quoted as a wavelength interval at the pump wavelength.
    double phasematch_bandwidth_nm = 0.08;
    int grid_resolution = 512;
    // Gaussian edge RMS as a fraction of each pump channel width.
    double edge_fraction = 0.1;

    static JsiSpec integrated_design();
};

struct JsiGrid {
    std::vector<double> signal_axis_nm;  // rows, ascending
    std::vector<double> idler_axis_nm;   // columns, ascending
    std::vector<double> intensity;       // row-major, sums to 1
    std::vector<PumpChannel> pump_channels;

    std::size_t rows() const { return signal_axis_nm.size(); }
    std::size_t cols() const { return idler_axis_nm.size(); }
    double at(std::size_t r, std::size_t c) const { return intensity[r * cols() + c]; }
};

JsiGrid compute_jsi(const JsiSpec& spec);

struct Band {
    double lo_nm = 0.0;
    double hi_nm = 0.0;
};

struct ChannelBands {
    std::vector<Band> signal;
    std::vector<Band> idler;
};

// Signal/idler images of each pump channel at the phase-matching centre.
ChannelBands channel_bands(const JsiSpec& spec);

// N x N matrix (row-major) of 10 log10(P(signal band i, idler band j) / P(i, i)).
std::vector<double> crosstalk_matrix(const JsiGrid& jsi, const ChannelBands& bands);

// Largest off-diagonal entry; -inf for a single channel.
double max_offdiagonal_db(std::span<const double> matrix, std::size_t n);

}  // namespace qnet
