#include "qnet/network_topology.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "qnet/error.hpp"
#include "qnet/units.hpp"

namespace qnet {

NetworkMode mode_for(SwitchPosition pos) {
    return pos == SwitchPosition::Top ? NetworkMode::Satellite : NetworkMode::Ground;
}

std::string_view to_string(SwitchPosition pos) {
    switch (pos) {
        case SwitchPosition::Top: return "top";
        case SwitchPosition::Middle: return "middle";
        case SwitchPosition::Bottom: return "bottom";
    }
    return "?";
}

std::string_view to_string(NetworkMode mode) {
    return mode == NetworkMode::Satellite ? "satellite" : "ground";
}

std::string_view to_string(Arm arm) { return arm == Arm::Signal ? "signal" : "idler"; }

SwitchPosition parse_switch_position(std::string_view text) {
    if (text == "top") return SwitchPosition::Top;
    if (text == "middle") return SwitchPosition::Middle;
    if (text == "bottom") return SwitchPosition::Bottom;
    throw ValidationError("expected one of top, middle, bottom; got '" + std::string(text) + "'",
                          "network.switch");
}

std::optional<std::size_t> node_index(std::string_view name) {
    for (std::size_t i = 0; i < kNodeCount; ++i)
        if (kNodes[i] == name) return i;
    return std::nullopt;
}

std::vector<ChannelPair> default_channel_plan() {
    std::vector<ChannelPair> plan;
    const double centres[] = {781.5, 785.5, 789.5, 793.5};
    for (int k = 0; k < 4; ++k) {
        plan.push_back({k + 1, centres[k], units::partner_wavelength_nm(kPumpNm, centres[k]), 3.0});
    }
    return plan;
}

const ChannelPair* ConnectivityGraph::channel(int index) const {
    for (const auto& c : plan)
        if (c.index == index) return &c;
    return nullptr;
}

ConnectivityGraph connectivity(SwitchPosition pos) {
    ConnectivityGraph g;
    g.mode = mode_for(pos);
    g.plan = default_channel_plan();
    switch (pos) {
        case SwitchPosition::Top:
            g.edges = {
                {"alice", "satellite", {{1, "satellite", "alice"}}},
                {"bob", "satellite", {{2, "satellite", "bob"}}},
                {"charlie", "satellite", {{3, "satellite", "charlie"}}},
                {"dana", "satellite", {{4, "satellite", "dana"}}},
            };
            break;
        case SwitchPosition::Middle:
            // Alice holds Lambda1 and lambda3; Charlie holds lambda1 and Lambda3.
            g.edges = {
                {"alice", "charlie", {{1, "charlie", "alice"}, {3, "alice", "charlie"}}},
                {"bob", "charlie", {{2, "charlie", "bob"}}},
            };
            break;
        case SwitchPosition::Bottom:
            g.edges = {
                {"alice", "bob", {{1, "bob", "alice"}, {2, "alice", "bob"}}},
                {"bob", "charlie", {{3, "bob", "charlie"}}},
            };
            break;
    }
    return g;
}

ConnectivityGraph simultaneous_ground() {
    ConnectivityGraph merged = connectivity(SwitchPosition::Middle);
    for (auto& e : connectivity(SwitchPosition::Bottom).edges) merged.edges.push_back(std::move(e));
    return merged;
}

std::vector<Violation> validate_allocation(const ConnectivityGraph& graph) {
    std::vector<Violation> out;
    using Kind = Violation::Kind;

    // Each photon (channel, arm) may be routed to one place only.
    std::map<std::pair<int, Arm>, std::string> owner;
    std::set<int> used;
    for (const auto& e : graph.edges) {
        for (const auto& lc : e.channels) {
            if (graph.channel(lc.channel) == nullptr) {
                out.push_back({Kind::UnknownChannel,
                               e.name() + " references channel " + std::to_string(lc.channel)});
                continue;
            }
            used.insert(lc.channel);
            for (Arm arm : {Arm::Signal, Arm::Idler}) {
                const auto [it, fresh] = owner.emplace(std::pair{lc.channel, arm}, e.name());
                if (!fresh) {
                    out.push_back({Kind::WavelengthReuse,
                                   std::string(arm == Arm::Signal ? "lambda" : "Lambda") +
                                       std::to_string(lc.channel) + " assigned to both " + it->second +
                                       " and " + e.name()});
                }
            }
        }
    }

    std::vector<const ChannelPair*> active;
    for (int idx : used) active.push_back(graph.channel(idx));
    std::sort(active.begin(), active.end(),
              [](auto* a, auto* b) { return a->signal_nm < b->signal_nm; });
    for (const ChannelPair* c : active) {
        const double lo = c->signal_nm - 0.5 * c->signal_width_nm;
        const double hi = c->signal_nm + 0.5 * c->signal_width_nm;
        if (lo < kSignalWindowLoNm - 1e-9 || hi > kSignalWindowHiNm + 1e-9) {
            out.push_back({Kind::OutsideWindow,
                           "lambda" + std::to_string(c->index) + " leaves the 780-795 nm window"});
        }
    }
    for (std::size_t k = 1; k < active.size(); ++k) {
        const ChannelPair* a = active[k - 1];
        const ChannelPair* b = active[k];
        const double gap = (b->signal_nm - 0.5 * b->signal_width_nm) - (a->signal_nm + 0.5 * a->signal_width_nm);
        if (gap < kGuardBandNm - 1e-9) {
            out.push_back({Kind::GuardBand, "lambda" + std::to_string(a->index) + " and lambda" +
                                                std::to_string(b->index) + " are separated by " +
                                                std::to_string(gap) + " nm (< 1 nm guard band)"});
        }
    }
    return out;
}

double LossBudget::total_db() const {
    double total = 0.0;
    for (const auto& item : items) total += item.loss_db;
    return total;
}

double LossBudget::optical_db() const {
    double total = 0.0;
    for (const auto& item : items)
        if (!item.detection) total += item.loss_db;
    return total;
}

namespace {

// Cascaded circulator + FBG demultiplexing loss of the idler stage per user.
const std::map<std::string, double, std::less<>> kIdlerDemuxDb = {
    {"alice", 4.9}, {"bob", 7.7}, {"charlie", 10.5}, {"dana", 8.5}};

constexpr double kWaveguideAndBridgeDb = 8.0;     // coupling + free-space bridge, idler arm
constexpr double kWaveguideCouplingDb = 4.5;
constexpr double kSignalBridgeDb = 7.96;          // 16 % coupling into PM780
constexpr double kFtmCirculatorDb = 3.0;
constexpr double kFtmArrayDb = 7.0;
constexpr double kSatFibreDb = 1.3;               // 5 m PM780 fibre and mating, residual
constexpr double kSignalFbgDb = 1.5;
constexpr double kWdm1550Db = 0.97;
constexpr double kWdm780Db = 3.02;
constexpr double kSiApdEfficiency = 0.60;

double efficiency_db(double eta) { return -10.0 * std::log10(eta); }

}  // namespace

LossBudget path_loss(std::string_view route, NetworkMode mode) {
    const auto dot = route.find('.');
    require(dot != std::string_view::npos, "expected <node>.<signal|idler>, got '" + std::string(route) + "'");
    const std::string node(route.substr(0, dot));
    const std::string_view arm = route.substr(dot + 1);
    require(arm == "signal" || arm == "idler", "unknown arm '" + std::string(arm) + "'");

    LossBudget b;
    if (mode == NetworkMode::Satellite) {
        if (node == "satellite" && arm == "signal") {
            b.items = {{"waveguide coupling", kWaveguideCouplingDb},
                       {"free-space bridge (signal)", kSignalBridgeDb},
                       {"FTM circulator", kFtmCirculatorDb},
                       {"FTM grating array", kFtmArrayDb},
                       {"PM780 fibre to detector", kSatFibreDb},
                       {"Si-APD efficiency", efficiency_db(kSiApdEfficiency), true}};
            return b;
        }
        const auto it = kIdlerDemuxDb.find(node);
        require(arm == "idler" && it != kIdlerDemuxDb.end(),
                "unknown route '" + std::string(route) + "' in satellite mode");
        b.items = {{"idler demultiplexer (" + node + ")", it->second},
                   {"waveguide coupling and free-space bridge", kWaveguideAndBridgeDb}};
        return b;
    }

    // Ground mode: Dana has no ground links and the satellite receiver is idle.
    require(node == "alice" || node == "bob" || node == "charlie",
            "unknown route '" + std::string(route) + "' in ground mode");
    if (arm == "idler") {
        b.items = {{"idler demultiplexer (" + node + ")", kIdlerDemuxDb.find(node)->second},
                   {"waveguide coupling and free-space bridge", kWaveguideAndBridgeDb},
                   {"1550/780 WDM (1550 nm)", kWdm1550Db}};
    } else {
        b.items = {{"waveguide coupling", kWaveguideCouplingDb},
                   {"free-space bridge (signal)", kSignalBridgeDb},
                   {"signal FBG", kSignalFbgDb},
                   {"1550/780 WDM (780 nm)", kWdm780Db}};
    }
    return b;
}

}  // namespace qnet
