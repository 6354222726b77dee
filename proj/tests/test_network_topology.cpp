#include <doctest.h>

#include <algorithm>
#include <set>

#include "qnet/error.hpp"
#include "qnet/network_topology.hpp"
#include "qnet/units.hpp"

using namespace qnet;

namespace {

std::set<std::string> link_names(const ConnectivityGraph& g) {
    std::set<std::string> out;
    for (const auto& e : g.edges) out.insert(e.name());
    return out;
}

const Edge& edge(const ConnectivityGraph& g, const std::string& name) {
    for (const auto& e : g.edges)
        if (e.name() == name) return e;
    throw std::runtime_error("no edge " + name);
}

}  // namespace

TEST_CASE("channel plan") {
    const auto plan = default_channel_plan();
    REQUIRE(plan.size() == 4);
    const double centres[] = {781.5, 785.5, 789.5, 793.5};
    for (int k = 0; k < 4; ++k) {
        CHECK(plan[k].index == k + 1);
        CHECK(plan[k].signal_nm == centres[k]);
        CHECK(plan[k].signal_width_nm == 3.0);
        CHECK(1 / plan[k].signal_nm + 1 / plan[k].idler_nm == doctest::Approx(1 / 521.4).epsilon(1e-14));
    }
}

TEST_CASE("top position: four satellite links, one channel each") {
    const auto g = connectivity(SwitchPosition::Top);
    CHECK(g.mode == NetworkMode::Satellite);
    CHECK(link_names(g) == std::set<std::string>{"alice-satellite", "bob-satellite", "charlie-satellite", "dana-satellite"});
    int k = 1;
    for (const char* user : {"alice", "bob", "charlie", "dana"}) {
        const auto& e = edge(g, std::string(user) + "-satellite");
        REQUIRE(e.channels.size() == 1);
        CHECK(e.channels[0].channel == k++);
        CHECK(e.channels[0].signal_node == "satellite");
        CHECK(e.channels[0].idler_node == user);
    }
}

TEST_CASE("middle position") {
    const auto g = connectivity(SwitchPosition::Middle);
    CHECK(g.mode == NetworkMode::Ground);
    CHECK(link_names(g) == std::set<std::string>{"alice-charlie", "bob-charlie"});
    const auto& ac = edge(g, "alice-charlie");
    REQUIRE(ac.channels.size() == 2);
    // Alice: Lambda1 and lambda3.
    CHECK(ac.channels[0].channel == 1);
    CHECK(ac.channels[0].idler_node == "alice");
    CHECK(ac.channels[1].channel == 3);
    CHECK(ac.channels[1].signal_node == "alice");
    const auto& bc = edge(g, "bob-charlie");
    REQUIRE(bc.channels.size() == 1);
    CHECK(bc.channels[0].channel == 2);
    CHECK(bc.channels[0].idler_node == "bob");
    CHECK(bc.channels[0].signal_node == "charlie");
}

TEST_CASE("bottom position") {
    const auto g = connectivity(SwitchPosition::Bottom);
    CHECK(link_names(g) == std::set<std::string>{"alice-bob", "bob-charlie"});
    const auto& ab = edge(g, "alice-bob");
    REQUIRE(ab.channels.size() == 2);
    CHECK(ab.channels[0].channel == 1);
    CHECK(ab.channels[0].idler_node == "alice");
    CHECK(ab.channels[1].channel == 2);
    CHECK(ab.channels[1].signal_node == "alice");
    const auto& bc = edge(g, "bob-charlie");
    REQUIRE(bc.channels.size() == 1);
    CHECK(bc.channels[0].channel == 3);
    CHECK(bc.channels[0].signal_node == "bob");
    CHECK(bc.channels[0].idler_node == "charlie");
}

TEST_CASE("every switch position validates; the ground union is fully connected") {
    for (auto pos : {SwitchPosition::Top, SwitchPosition::Middle, SwitchPosition::Bottom})
        CHECK(validate_allocation(connectivity(pos)).empty());
    const auto names = link_names(simultaneous_ground());
    for (const char* l : {"alice-bob", "alice-charlie", "bob-charlie"}) CHECK(names.count(l) == 1);
    for (const auto& n : names) CHECK(n.find("dana") == std::string::npos);
}

TEST_CASE("simultaneous ground reuses wavelengths") {
    const auto v = validate_allocation(simultaneous_ground());
    CHECK(!v.empty());
    CHECK(std::all_of(v.begin(), v.end(), [](auto& x) { return x.kind == Violation::Kind::WavelengthReuse; }));
}

TEST_CASE("reuse, guard-band, window and unknown-channel violations") {
    ConnectivityGraph g = connectivity(SwitchPosition::Top);
    g.edges[1].channels[0].channel = 1;  // bob-satellite on channel 1 as well
    auto v = validate_allocation(g);
    REQUIRE(v.size() == 2);  // signal and idler of channel 1
    CHECK(v[0].kind == Violation::Kind::WavelengthReuse);

    ConnectivityGraph close;
    close.plan = {{1, 781.5, units::partner_wavelength_nm(521.4, 781.5), 3.0},
                  {2, 782.0, units::partner_wavelength_nm(521.4, 782.0), 3.0}};
    close.edges = {{"alice", "bob", {{1, "bob", "alice"}, {2, "alice", "bob"}}}};
    v = validate_allocation(close);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == Violation::Kind::GuardBand);

    ConnectivityGraph outside;
    outside.plan = {{1, 779.0, 1570.0, 3.0}};
    outside.edges = {{"alice", "bob", {{1, "bob", "alice"}}}};
    v = validate_allocation(outside);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == Violation::Kind::OutsideWindow);

    ConnectivityGraph unknown = connectivity(SwitchPosition::Top);
    unknown.edges[0].channels[0].channel = 9;
    v = validate_allocation(unknown);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == Violation::Kind::UnknownChannel);
}

TEST_CASE("satellite-mode loss budgets") {
    const double idler[] = {12.9, 15.7, 18.5, 16.5};
    int k = 0;
    for (const char* user : {"alice", "bob", "charlie", "dana"})
        CHECK(path_loss(std::string(user) + ".idler", NetworkMode::Satellite).total_db() == doctest::Approx(idler[k++]));
    const LossBudget sig = path_loss("satellite.signal", NetworkMode::Satellite);
    CHECK(std::abs(sig.total_db() - 26.0) <= 0.5);
    CHECK(sig.optical_db() < sig.total_db());
}

TEST_CASE("ground-mode loss budgets") {
    CHECK(path_loss("alice.idler", NetworkMode::Ground).total_db() == doctest::Approx(12.9 + 0.97));
    CHECK(path_loss("bob.signal", NetworkMode::Ground).total_db() == doctest::Approx(4.5 + 7.96 + 1.5 + 3.02));
    CHECK_THROWS_AS(path_loss("dana.idler", NetworkMode::Ground), ValidationError);
    CHECK_THROWS_AS(path_loss("satellite.signal", NetworkMode::Ground), ValidationError);
    CHECK_THROWS_AS(path_loss("alice.sideways", NetworkMode::Ground), ValidationError);
    CHECK_THROWS_AS(path_loss("alice", NetworkMode::Ground), ValidationError);
}

TEST_CASE("loss totals are additive and order independent") {
    LossBudget empty;
    CHECK(empty.total_db() == 0.0);
    LossBudget b = path_loss("satellite.signal", NetworkMode::Satellite);
    double sum = 0;
    for (const auto& i : b.items) sum += i.loss_db;
    CHECK(b.total_db() == doctest::Approx(sum));
    const double before = b.total_db();
    std::reverse(b.items.begin(), b.items.end());
    CHECK(b.total_db() == doctest::Approx(before).epsilon(1e-15));
}

TEST_CASE("names and parsing") {
    CHECK(parse_switch_position("middle") == SwitchPosition::Middle);
    CHECK_THROWS_AS(parse_switch_position("sideways"), ValidationError);
    CHECK(node_index("satellite") == 4u);
    CHECK(!node_index("eve"));
    CHECK(to_string(SwitchPosition::Bottom) == "bottom");
}
