#include "qnet/source_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qnet/error.hpp"
#include "qnet/kernels.hpp"
#include "qnet/random.hpp"

namespace qnet {

void SourceSpec::validate() const {
    require(brightness >= 0.0, "must be >= 0", "source.brightness");
    require(pump_power_mw >= 0.0, "must be >= 0", "source.pump_power_mw");
    require(rep_rate_hz > 0.0 && std::isfinite(rep_rate_hz), "must be > 0", "source.rep_rate_hz");
    require(n_channels >= 1, "must be >= 1", "source.n_channels");
    require(crosstalk_db <= 0.0, "must be <= 0 dB", "source.crosstalk_db");
}

Picoseconds pulse_period_ps(const SourceSpec& src) {
    require(src.rep_rate_hz > 0.0, "must be > 0", "source.rep_rate_hz");
    return static_cast<Picoseconds>(std::llround(units::kPsPerSecond / src.rep_rate_hz));
}

double mean_pairs_per_pulse(const SourceSpec& src) {
    require(src.rep_rate_hz > 0.0, "must be > 0", "source.rep_rate_hz");
    return src.pair_rate() / src.rep_rate_hz;
}

std::vector<PairEvent> sample_pairs(const SourceSpec& src, std::int64_t n_pulses, std::uint64_t seed,
                                    std::int64_t first_pulse) {
    src.validate();
    require(n_pulses >= 0, "n_pulses must be >= 0");
    std::vector<PairEvent> events;
    const double mu = mean_pairs_per_pulse(src);
    if (n_pulses == 0 || mu <= 0.0) return events;

    // Independent Poisson(mu/N) counts in each of n_pulses * N cells are
    // equivalent to a Poisson total scattered uniformly over the cells.
    Rng rng(seed);
    const auto cells = static_cast<std::uint64_t>(n_pulses) * static_cast<std::uint64_t>(src.n_channels);
    std::poisson_distribution<std::int64_t> total_dist(mu * static_cast<double>(n_pulses));
    const std::int64_t total = total_dist(rng);
    std::uniform_int_distribution<std::uint64_t> cell_dist(0, cells - 1);
    std::vector<std::uint64_t> drawn(static_cast<std::size_t>(total));
    for (auto& c : drawn) c = cell_dist(rng);
    std::sort(drawn.begin(), drawn.end());

    const Picoseconds period = pulse_period_ps(src);
    const bool crosstalk = std::isfinite(src.crosstalk_db);
    const double leak = crosstalk ? units::db_to_linear(src.crosstalk_db) : 0.0;
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    events.reserve(drawn.size());
    for (std::uint64_t c : drawn) {
        PairEvent ev;
        ev.pulse_index = first_pulse + static_cast<std::int64_t>(c / src.n_channels);
        ev.channel_index = static_cast<int>(c % src.n_channels);
        ev.idler_channel = ev.channel_index;
        ev.emission_time_ps = ev.pulse_index * period;
        if (crosstalk) {
            const double u = unit(rng);
            const bool has_left = ev.channel_index > 0;
            const bool has_right = ev.channel_index + 1 < src.n_channels;
            if (has_left && u < leak) {
                ev.idler_channel = ev.channel_index - 1;
            } else if (has_right && u >= (has_left ? leak : 0.0) && u < (has_left ? 2.0 : 1.0) * leak) {
                ev.idler_channel = ev.channel_index + 1;
            }
        }
        events.push_back(ev);
    }
    return events;
}

std::vector<PumpChannel> layout_pump_channels(double center_nm, int n, double width_nm, double gap_nm) {
    require(n >= 1, "need at least one pump channel");
    require(width_nm > 0.0 && gap_nm >= 0.0, "channel width must be > 0 and gap >= 0");
    const double pitch = width_nm + gap_nm;
    const double first = center_nm - 0.5 * pitch * (n - 1);
    std::vector<PumpChannel> out;
    for (int k = 0; k < n; ++k) out.push_back({first + k * pitch, width_nm});
    return out;
}

JsiSpec JsiSpec::integrated_design() {
    JsiSpec spec;
    // 1.75 nm of pump: four 0.25 nm channels with 0.25 nm gaps.
    spec.pump_channels = layout_pump_channels(521.4, 4, 0.25, 0.25);
    return spec;
}

namespace {

struct FrequencyPlan {
    std::vector<kernels::PumpSegment> segments;  // sorted by frequency
    double pm_center_thz = 0.0;
    double pm_sigma_thz = 0.0;
};

FrequencyPlan frequency_plan(const JsiSpec& spec) {
    require(!spec.pump_channels.empty(), "at least one pump channel required");
    require(spec.phasematch_bandwidth_nm > 0.0, "must be > 0", "jsi.phasematch_bandwidth_nm");
    require(spec.edge_fraction > 0.0, "must be > 0", "jsi.edge_fraction");

    std::vector<PumpChannel> sorted = spec.pump_channels;
    std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.center_nm < b.center_nm; });
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        require(sorted[k].width_nm > 0.0, "pump channel width must be > 0");
        if (k > 0) {
            const double prev_hi = sorted[k - 1].center_nm + 0.5 * sorted[k - 1].width_nm;
            const double lo = sorted[k].center_nm - 0.5 * sorted[k].width_nm;
            require(lo >= prev_hi - 1e-12, "pump channels overlap");
        }
    }

    FrequencyPlan plan;
    double mean_pump_nm = 0.0;
    for (const auto& ch : sorted) {
        const double f_lo = units::nm_to_thz(ch.center_nm + 0.5 * ch.width_nm);
        const double f_hi = units::nm_to_thz(ch.center_nm - 0.5 * ch.width_nm);
        plan.segments.push_back({f_lo, f_hi, spec.edge_fraction * (f_hi - f_lo)});
        mean_pump_nm += ch.center_nm / sorted.size();
    }
    std::sort(plan.segments.begin(), plan.segments.end(),
              [](auto& a, auto& b) { return a.lo_thz < b.lo_thz; });
    plan.pm_center_thz = units::nm_to_thz(spec.signal_center_nm) - units::nm_to_thz(spec.idler_center_nm);
    const double f_pump = units::nm_to_thz(mean_pump_nm);
    plan.pm_sigma_thz = f_pump * spec.phasematch_bandwidth_nm / mean_pump_nm;
    return plan;
}

}  // namespace

ChannelBands channel_bands(const JsiSpec& spec) {
    // Keep the caller's channel order.
    const FrequencyPlan plan = frequency_plan(spec);
    ChannelBands bands;
    for (const auto& ch : spec.pump_channels) {
        const double f_lo = units::nm_to_thz(ch.center_nm + 0.5 * ch.width_nm);
        const double f_hi = units::nm_to_thz(ch.center_nm - 0.5 * ch.width_nm);
        const double s_lo = 0.5 * (f_lo + plan.pm_center_thz);
        const double s_hi = 0.5 * (f_hi + plan.pm_center_thz);
        const double i_lo = 0.5 * (f_lo - plan.pm_center_thz);
        const double i_hi = 0.5 * (f_hi - plan.pm_center_thz);
        bands.signal.push_back({units::thz_to_nm(s_hi), units::thz_to_nm(s_lo)});
        bands.idler.push_back({units::thz_to_nm(i_hi), units::thz_to_nm(i_lo)});
    }
    return bands;
}

JsiGrid compute_jsi(const JsiSpec& spec) {
    require(spec.grid_resolution >= 64, "must be >= 64", "jsi.grid_resolution");
    const FrequencyPlan plan = frequency_plan(spec);

    // Cover every lobe plus a margin of a quarter of the pump span and three
    // phase-matching widths on each side.
    const double pump_lo = plan.segments.front().lo_thz;
    const double pump_hi = plan.segments.back().hi_thz;
    const double margin = 0.25 * (pump_hi - pump_lo) + 1.5 * plan.pm_sigma_thz;
    const double s_lo = 0.5 * (pump_lo + plan.pm_center_thz) - margin;
    const double s_hi = 0.5 * (pump_hi + plan.pm_center_thz) + margin;
    const double i_lo = 0.5 * (pump_lo - plan.pm_center_thz) - margin;
    const double i_hi = 0.5 * (pump_hi - plan.pm_center_thz) + margin;

    const auto n = static_cast<std::size_t>(spec.grid_resolution);
    auto axis = [n](double f_lo, double f_hi) {
        const double lam_lo = units::thz_to_nm(f_hi);
        const double lam_hi = units::thz_to_nm(f_lo);
        std::vector<double> out(n);
        for (std::size_t k = 0; k < n; ++k) out[k] = lam_lo + (lam_hi - lam_lo) * k / (n - 1);
        return out;
    };

    JsiGrid grid;
    grid.signal_axis_nm = axis(s_lo, s_hi);
    grid.idler_axis_nm = axis(i_lo, i_hi);
    grid.pump_channels = spec.pump_channels;
    grid.intensity.assign(n * n, 0.0);

    std::vector<double> idler_thz(n);
    for (std::size_t c = 0; c < n; ++c) idler_thz[c] = units::nm_to_thz(grid.idler_axis_nm[c]);

    const auto& k = kernels::active();
    const kernels::JsiRowParams params{plan.segments, plan.pm_center_thz, plan.pm_sigma_thz};
    for (std::size_t r = 0; r < n; ++r) {
        k.jsi_row(params, units::nm_to_thz(grid.signal_axis_nm[r]), idler_thz,
                  std::span<double>(grid.intensity).subspan(r * n, n));
    }
    const double total = k.sum(grid.intensity);
    require(total > 0.0, "joint spectrum vanishes on the grid");
    k.scale(grid.intensity, 1.0 / total);
    return grid;
}

namespace {

std::pair<std::size_t, std::size_t> index_range(const std::vector<double>& axis, const Band& band) {
    const auto first = std::lower_bound(axis.begin(), axis.end(), band.lo_nm);
    const auto last = std::upper_bound(axis.begin(), axis.end(), band.hi_nm);
    return {static_cast<std::size_t>(first - axis.begin()), static_cast<std::size_t>(last - axis.begin())};
}

void check_bands(const std::vector<Band>& bands, const char* axis) {
    for (std::size_t i = 0; i < bands.size(); ++i) {
        require(bands[i].hi_nm > bands[i].lo_nm, std::string("empty band on ") + axis + " axis");
        for (std::size_t j = 0; j < i; ++j) {
            const bool disjoint = bands[i].lo_nm >= bands[j].hi_nm || bands[j].lo_nm >= bands[i].hi_nm;
            require(disjoint, std::string("overlapping bands on ") + axis + " axis");
        }
    }
}

}  // namespace

std::vector<double> crosstalk_matrix(const JsiGrid& jsi, const ChannelBands& bands) {
    require(bands.signal.size() == bands.idler.size() && !bands.signal.empty(),
            "need one signal and one idler band per channel");
    check_bands(bands.signal, "signal");
    check_bands(bands.idler, "idler");

    const std::size_t n = bands.signal.size();
    const auto& k = kernels::active();
    std::vector<double> power(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [r0, r1] = index_range(jsi.signal_axis_nm, bands.signal[i]);
        require(r1 > r0, "signal band contains no grid points");
        for (std::size_t j = 0; j < n; ++j) {
            const auto [c0, c1] = index_range(jsi.idler_axis_nm, bands.idler[j]);
            require(c1 > c0, "idler band contains no grid points");
            double p = 0.0;
            for (std::size_t r = r0; r < r1; ++r) {
                p += k.sum(std::span<const double>(jsi.intensity).subspan(r * jsi.cols() + c0, c1 - c0));
            }
            power[i * n + j] = p;
        }
    }
    std::vector<double> db(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        require(power[i * n + i] > 0.0, "matched band carries no power");
        for (std::size_t j = 0; j < n; ++j) {
            db[i * n + j] = i == j ? 0.0 : 10.0 * std::log10(power[i * n + j] / power[i * n + i]);
        }
    }
    return db;
}

double max_offdiagonal_db(std::span<const double> matrix, std::size_t n) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) worst = std::max(worst, matrix[i * n + j]);
    return worst;
}

}  // namespace qnet
