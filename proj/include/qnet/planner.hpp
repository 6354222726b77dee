#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "qnet/detection.hpp"
#include "qnet/metrics.hpp"
#include "qnet/source_model.hpp"

namespace qnet {

// floor(1 / (rep_rate * jitter * slots_per_channel)), jitter in ps.
int max_time_channels(double rep_rate_hz, double jitter_ps, double slots_per_channel = 1.0);

// Channels of `spacing_ghz` that fit between the optical frequencies of the
// window edges.
int spectral_channels(double lo_nm, double hi_nm, double spacing_ghz);

enum class PlanObjective { SecureKeyRate, CoincidenceRate };

struct PlannerOptions {
    PlanObjective objective = PlanObjective::SecureKeyRate;
    bool jitter_bound = true;
    double slots_per_channel = 1.0;
    int spectral_capacity = 72;   // 780-795 nm at 100 GHz
    double idler_loss_db = 0.0;   // local arm; the swept link is the signal arm
    double window_ps = 1000.0;    // coincidence window seen by dark counts
    QkdParams qkd;
};

struct TradeoffPoint {
    double rep_rate_hz = 0.0;
    int n_channels = 0;
    double per_channel_rate = 0.0;  // objective units (bit/s or coincidences/s)
    double total_rate = 0.0;
    double per_channel_coincidence_rate = 0.0;
    double car = 0.0;
};

struct TradeoffCurve {
    std::vector<TradeoffPoint> points;
    std::size_t best = 0;
};

// Evaluate the FTM satellite link at every repetition rate. The total pair
// rate is split evenly over the channels in use; the signal detector is
// shared by all channels and each channel has its own idler detector.
// Dead-time saturation r / (1 + r tau) scales coincidences at both ends.
TradeoffCurve optimize_rep_rate(const SourceSpec& source, const DetectorSpec& det, double channel_loss_db,
                                const std::vector<double>& rate_grid, const PlannerOptions& options = {});

// Log-spaced grid from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int points);

struct GridChannel {
    double center_thz = 0.0;
    double width_ghz = 0.0;
};

struct GridAllocation {
    std::vector<GridChannel> channels;
    double guard_ghz = 0.0;
    std::map<int, std::vector<int>> users;  // user -> channel indices

    int served_users() const { return static_cast<int>(users.size()); }
};

struct FlexGridWindow {
    double lo_nm = 780.0;
    double hi_nm = 795.0;
    double spacing_ghz = 100.0;
    double guard_ghz = 0.0;
};

// Contiguous, balanced channel blocks. Serves the largest user count that
// still gets min_channels_per_user each.
GridAllocation flexgrid_allocate(int n_users, int total_channels, int min_channels_per_user,
                                 const FlexGridWindow& window = {});

}  // namespace qnet
