#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>

#include "qnet/network_topology.hpp"
#include "qnet/planner.hpp"
#include "qnet/sim_engine.hpp"
#include "qnet/source_model.hpp"

namespace qnet {

inline constexpr std::string_view kVersion = "0.1.0";

std::string_view to_string(CarFlag flag);

// Every CSV starts with "# qnet <version> seed=<seed|none>" then a header row.
void write_csv_preamble(std::ostream& out, std::optional<std::uint64_t> seed);

// link,pump_power_mw,n_channels,matched,unmatched_mean,car,car_err,car_flag,
// visibility,visibility_clamped,qber,gain,skr_per_pulse,skr_per_s
void write_metrics_csv(std::ostream& out, std::span<const LinkResult> links, double pump_power_mw,
                       std::uint64_t seed);

// parameter,value,repetition,seed, then the metrics columns.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows, std::uint64_t master_seed);

// link,offset_ps,count
void write_histogram_csv(std::ostream& out, std::span<const LinkResult> links, std::uint64_t seed);

// rep_rate_hz,n_channels,per_channel_rate,total_rate,per_channel_coincidence_rate,car,best
void write_tradeoff_csv(std::ostream& out, const TradeoffCurve& curve);

// Header row: "signal_nm\idler_nm" then the idler axis; one row per signal wavelength.
void write_jsi_csv(std::ostream& out, const JsiGrid& jsi);

// signal_channel,idler_channel,crosstalk_db
void write_crosstalk_csv(std::ostream& out, std::span<const double> matrix, std::size_t n);

// mode,link,channel,signal_node,idler_node,signal_nm,idler_nm
void write_topology_csv(std::ostream& out, const ConnectivityGraph& graph);

}  // namespace qnet
