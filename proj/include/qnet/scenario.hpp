#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "qnet/detection.hpp"
#include "qnet/metrics.hpp"
#include "qnet/network_topology.hpp"
#include "qnet/source_model.hpp"
#include "qnet/transport.hpp"

namespace qnet {

// Partial ChannelSpec from a [channels.<node>.<arm>] section; unset fields
// keep the built-in route defaults.
struct RouteOverride {
    std::optional<double> loss_db;
    std::optional<double> propagation_delay_ps;
    std::optional<double> extra_jitter_ps;
    std::optional<double> ftm_delay_ps;
};

struct CoincidenceSettings {
    Picoseconds window_ps = 1000;
    int unmatched_slots = 4;
};

struct ScenarioConfig {
    SourceSpec source;
    SwitchPosition position = SwitchPosition::Top;
    bool simultaneous_ground = false;
    // Per-channel arrival offset that separates channels on one ground detector.
    double ground_slot_pitch_ps = 3000.0;
    FtmSpec ftm;
    std::map<std::string, DetectorSpec> detectors;   // keyed by node
    std::map<std::string, RouteOverride> routes;     // keyed by "<node>.<arm>"
    double duration_s = 1.0;
    std::uint64_t master_seed = 1;
    CoincidenceSettings coincidence;
    QkdParams qkd;

    // Si-APD at the satellite and SNSPDs at the users,
    // 80 MHz at 0.1 mW.
    static ScenarioConfig defaults();
};

// Set one key. `section` is e.g. "source" or "detectors.alice"; errors carry
// the path "<section>.<key>".
void apply_setting(ScenarioConfig& cfg, std::string_view section, std::string_view key, std::string_view value);

// Strict INI-style parse on top of defaults(): sections [source], [network],
// [ftm], [detectors.<node>], [channels.<node>.<arm>], [run], [qkd]. Unknown
// sections or keys are errors.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

// Text that parse_scenario() reads back to an equal configuration.
std::string format_scenario(const ScenarioConfig& cfg);

// Inverse of the "bands" key format: "700-1000:0.06,1400-1700:0.75".
std::string format_bands(const std::vector<EfficiencyBand>& bands);

}  // namespace qnet
