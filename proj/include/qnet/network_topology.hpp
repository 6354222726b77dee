#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qnet {

enum class SwitchPosition { Top, Middle, Bottom };
enum class NetworkMode { Satellite, Ground };
enum class Arm { Signal, Idler };

NetworkMode mode_for(SwitchPosition pos);

std::string_view to_string(SwitchPosition pos);
std::string_view to_string(NetworkMode mode);
std::string_view to_string(Arm arm);
SwitchPosition parse_switch_position(std::string_view text);

// Nodes in a fixed order; the index doubles as the detector id in tag files.
inline constexpr std::string_view kNodes[] = {"alice", "bob", "charlie", "dana", "satellite"};
inline constexpr std::size_t kNodeCount = std::size(kNodes);
std::optional<std::size_t> node_index(std::string_view name);

// Satellite receiver acceptance window and the guard band kept between signal channels.
inline constexpr double kSignalWindowLoNm = 780.0;
inline constexpr double kSignalWindowHiNm = 795.0;
inline constexpr double kGuardBandNm = 1.0;
inline constexpr double kPumpNm = 521.4;

// Wavelength-correlated pair {lambda_i, Lambda_i}; `index` is 1-based.
struct ChannelPair {
    int index = 0;
    double signal_nm = 0.0;
    double idler_nm = 0.0;
    double signal_width_nm = 3.0;
};

// Default plan: FBG centres 781.5 / 785.5 / 789.5 / 793.5 nm, 3 nm wide, idlers
// by energy conservation with the pump.
std::vector<ChannelPair> default_channel_plan();

// One correlated pair carried by a link: who holds the signal photon and who
// holds the idler.
struct LinkChannel {
    int channel = 0;  // ChannelPair::index
    std::string signal_node;
    std::string idler_node;
};

struct Edge {
    std::string node_a;
    std::string node_b;
    std::vector<LinkChannel> channels;

    std::string name() const { return node_a + "-" + node_b; }
};

struct ConnectivityGraph {
    NetworkMode mode = NetworkMode::Satellite;
    std::vector<ChannelPair> plan;
    std::vector<Edge> edges;

    const ChannelPair* channel(int index) const;
};

// Link and channel assignment for the switch position.
ConnectivityGraph connectivity(SwitchPosition pos);

// Middle and Bottom edges merged, as if a passive circulator fed all three
// signal wavelengths at once.
ConnectivityGraph simultaneous_ground();

struct Violation {
    enum class Kind { WavelengthReuse, GuardBand, OutsideWindow, UnknownChannel };
    Kind kind;
    std::string message;
};

std::vector<Violation> validate_allocation(const ConnectivityGraph& graph);

struct LossItem {
    std::string component;
    double loss_db = 0.0;
    bool detection = false;  // detector efficiency expressed as loss
};

struct LossBudget {
    std::vector<LossItem> items;

    double total_db() const;
    // Total without detector-efficiency items, i.e. what the fibre path removes.
    double optical_db() const;
};

// Itemised loss of one arm into a node: identifiers are "<node>.signal" or
// "<node>.idler" (e.g. "alice.idler", "satellite.signal").
LossBudget path_loss(std::string_view route, NetworkMode mode);

}  // namespace qnet
