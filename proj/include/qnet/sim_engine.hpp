#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qnet/coincidence.hpp"
#include "qnet/metrics.hpp"
#include "qnet/scenario.hpp"

namespace qnet {

// One photon path: arm `arm` of correlated channel `channel` (0-based source
// channel) into the detector at `node`.
struct Route {
    std::string node;
    Arm arm = Arm::Signal;
    int channel = 0;
    double wavelength_nm = 0.0;
    ChannelSpec spec;
    // Nominal arrival time after emission: propagation + channel * ftm step.
    Picoseconds offset_ps = 0;
};

struct LinkChannelPlan {
    int channel = 0;  // 0-based source channel
    std::string signal_node;
    std::string idler_node;
    Picoseconds signal_offset_ps = 0;
    Picoseconds idler_offset_ps = 0;
};

struct LinkPlan {
    std::string name;
    std::vector<LinkChannelPlan> channels;
};

// Everything a run needs, resolved and validated from a ScenarioConfig.
struct ScenarioPlan {
    NetworkMode mode = NetworkMode::Satellite;
    std::vector<Route> routes;
    std::vector<LinkPlan> links;
    std::vector<std::string> nodes;  // nodes with at least one route, in kNodes order
    std::int64_t n_pulses = 0;
    Picoseconds period_ps = 0;
    Picoseconds duration_ps = 0;  // tagging window, covers the last arrival
};

// Throws ValidationError listing every problem found, one "path: message" per line.
ScenarioPlan plan_scenario(const ScenarioConfig& cfg);

struct LinkResult {
    std::string link;
    int n_channels = 0;
    CarResult car;
    MetricsRecord metrics;
    CoincidenceHistogram histogram;  // summed over the link's channels, relative to the matched slot
};

using TagSet = std::map<std::string, std::vector<TimeTag>>;  // node -> tags

struct RunResult {
    ScenarioPlan plan;
    TagSet tags;
    std::vector<LinkResult> links;
};

// Source -> transport -> detection for every route; tags per node.
TagSet simulate_tags(const ScenarioConfig& cfg, const ScenarioPlan& plan);

// Name of the row that sums every channel of every link.
inline constexpr const char* kAllLinks = "all";

// Per-link coincidence analysis and metric chain, followed by the kAllLinks
// row. Missing nodes count as empty.
std::vector<LinkResult> analyze_tags(const ScenarioConfig& cfg, const ScenarioPlan& plan, const TagSet& tags);

RunResult run_scenario(const ScenarioConfig& cfg);

struct SweepSpec {
    std::string parameter;  // "<section>.<key>", e.g. "source.pump_power_mw"
    std::vector<std::string> values;
    int repetitions = 5;
};

struct SweepRow {
    std::string parameter;
    std::string value;
    int repetition = 0;
    std::uint64_t seed = 0;
    double pump_power_mw = 0.0;
    LinkResult result;
};

// Cell (value v, repetition r) has index v * repetitions + r and runs with
// master_seed derive_seed(cfg.master_seed, index); cells run in parallel.
std::vector<SweepRow> sweep(const ScenarioConfig& cfg, const SweepSpec& spec);

// Worker count: QNET_THREADS if set, else hardware concurrency.
unsigned worker_threads();

}  // namespace qnet
