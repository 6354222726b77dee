#include "qnet/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qnet/error.hpp"
#include "qnet/transport.hpp"

namespace qnet {

int max_time_channels(double rep_rate_hz, double jitter_ps, double slots_per_channel) {
    require(rep_rate_hz > 0.0, "repetition rate must be > 0");
    require(jitter_ps > 0.0, "jitter must be > 0");
    require(slots_per_channel >= 1.0, "slots per channel must be >= 1");
    const double occupancy = rep_rate_hz * jitter_ps / units::kPsPerSecond * slots_per_channel;
    const double bound = 1.0 / occupancy;
    auto n = static_cast<long long>(std::floor(bound));
    // Recover exact products that land a hair below an integer.
    if (static_cast<double>(n + 1) * occupancy <= 1.0 + 1e-12) ++n;
    return static_cast<int>(std::min<long long>(n, 1LL << 30));
}

int spectral_channels(double lo_nm, double hi_nm, double spacing_ghz) {
    require(lo_nm > 0.0 && hi_nm > lo_nm, "window must satisfy 0 < lo < hi");
    require(spacing_ghz > 0.0, "spacing must be > 0");
    const double span_ghz = (units::nm_to_thz(lo_nm) - units::nm_to_thz(hi_nm)) * 1e3;
    const double n = span_ghz / spacing_ghz;
    auto count = static_cast<int>(std::floor(n));
    if (static_cast<double>(count + 1) <= n * (1.0 + 1e-12)) ++count;
    return count;
}

std::vector<double> log_grid(double lo, double hi, int points) {
    require(lo > 0.0 && hi >= lo && points >= 1, "grid needs 0 < lo <= hi and points >= 1");
    std::vector<double> out;
    if (points == 1) return {lo};
    const double step = std::log(hi / lo) / (points - 1);
    for (int k = 0; k < points; ++k) out.push_back(lo * std::exp(step * k));
    out.back() = hi;
    return out;
}

TradeoffCurve optimize_rep_rate(const SourceSpec& source, const DetectorSpec& det, double channel_loss_db,
                                const std::vector<double>& rate_grid, const PlannerOptions& options) {
    require(!rate_grid.empty(), "repetition-rate grid is empty");
    det.validate();
    options.qkd.validate();
    require(options.spectral_capacity >= 1, "spectral capacity must be >= 1");

    const auto eta_s = det.efficiency_at(source.signal_center_nm);
    const auto eta_i = det.efficiency_at(source.idler_center_nm);
    require(eta_s && eta_i, "detector bands must cover the signal and idler wavelengths");
    const double alpha_s = db_to_transmittance(channel_loss_db) * *eta_s;
    const double alpha_i = db_to_transmittance(options.idler_loss_db) * *eta_i;
    const double pair_rate = source.pair_rate();
    const double tau_s = det.dead_time_ns * 1e-9;
    const double dark_per_window = det.dark_rate_cps * options.window_ps / units::kPsPerSecond;

    TradeoffCurve curve;
    for (double rate : rate_grid) {
        require(rate > 0.0, "repetition rates must be > 0");
        TradeoffPoint pt;
        pt.rep_rate_hz = rate;
        int n = options.spectral_capacity;
        if (options.jitter_bound) n = std::min(n, max_time_channels(rate, det.jitter_ps, options.slots_per_channel));
        pt.n_channels = n;
        if (n > 0) {
            const double channel_pairs = pair_rate / n;     // pairs/s per channel
            const double mu = channel_pairs / rate;         // pairs/pulse per channel
            const double singles_s = pair_rate * alpha_s + det.dark_rate_cps;
            const double singles_i = channel_pairs * alpha_i + det.dark_rate_cps;
            const double survive = 1.0 / ((1.0 + singles_s * tau_s) * (1.0 + singles_i * tau_s));

            const double p_s = mu * alpha_s + dark_per_window;
            const double p_i = mu * alpha_i + dark_per_window;
            const double true_pp = mu * alpha_s * alpha_i;
            const double accidental_pp = p_s * p_i;
            const double gain = (true_pp + accidental_pp) * survive;
            pt.per_channel_coincidence_rate = gain * rate;
            pt.car = accidental_pp > 0.0 ? 1.0 + true_pp / accidental_pp
                                         : std::numeric_limits<double>::infinity();

            if (options.objective == PlanObjective::CoincidenceRate) {
                pt.per_channel_rate = pt.per_channel_coincidence_rate;
            } else if (pt.car > 1.0) {
                const double e = qber(visibility(pt.car).value);
                pt.per_channel_rate = skr(options.qkd, gain, e).clamped * rate;
            }
            pt.total_rate = n * pt.per_channel_rate;
        }
        curve.points.push_back(pt);
    }
    const auto best = std::max_element(curve.points.begin(), curve.points.end(),
                                       [](auto& a, auto& b) { return a.total_rate < b.total_rate; });
    curve.best = static_cast<std::size_t>(best - curve.points.begin());
    return curve;
}

GridAllocation flexgrid_allocate(int n_users, int total_channels, int min_channels_per_user,
                                 const FlexGridWindow& window) {
    require(total_channels > 0, "no channels to allocate");
    require(n_users >= 1, "need at least one user");
    require(min_channels_per_user >= 1, "minimum channels per user must be >= 1");
    require(window.guard_ghz >= 0.0 && window.guard_ghz < window.spacing_ghz, "guard must be in [0, spacing)");
    require(total_channels <= spectral_channels(window.lo_nm, window.hi_nm, window.spacing_ghz),
            "more channels than the window holds");

    GridAllocation alloc;
    alloc.guard_ghz = window.guard_ghz;
    const double top_thz = units::nm_to_thz(window.lo_nm);
    for (int k = 0; k < total_channels; ++k) {
        alloc.channels.push_back({top_thz - (k + 0.5) * window.spacing_ghz * 1e-3,
                                  window.spacing_ghz - window.guard_ghz});
    }

    const int served = std::min(n_users, total_channels / min_channels_per_user);
    require(served >= 1, "not enough channels for a single user");
    const int base = total_channels / served;
    const int extra = total_channels % served;
    int next = 0;
    for (int u = 0; u < served; ++u) {
        const int size = base + (u < extra ? 1 : 0);
        auto& block = alloc.users[u];
        for (int c = 0; c < size; ++c) block.push_back(next++);
    }
    return alloc;
}

}  // namespace qnet
