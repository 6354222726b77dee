#include <doctest.h>

#include <cmath>

#include "qnet/error.hpp"
#include "qnet/scenario.hpp"

using namespace qnet;

namespace {

std::string path_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ValidationError& e) {
        return e.path();
    }
    return "<no error>";
}

}  // namespace

TEST_CASE("defaults") {
    const auto cfg = ScenarioConfig::defaults();
    CHECK(cfg.source.rep_rate_hz == 80e6);
    CHECK(cfg.source.pump_power_mw == 0.1);
    CHECK(cfg.position == SwitchPosition::Top);
    CHECK(cfg.detectors.size() == 5);
    CHECK(cfg.detectors.at("satellite").efficiency_at(785) == 0.6);
    CHECK(cfg.detectors.at("alice").efficiency_at(1550) == 0.75);
    CHECK(cfg.coincidence.window_ps == 1000);
    CHECK(cfg.coincidence.unmatched_slots == 4);
}

TEST_CASE("parse sections and keys") {
    const auto cfg = parse_scenario(R"(
; comment
[source]
pump_power_mw = 0.5
n_channels = 2
crosstalk_db = -20

[network]
switch = bottom

[detectors.bob]
preset = ideal
dark_rate_cps = 50

[channels.alice.idler]
loss_db = 3.5

[run]
duration_s = 0.002
master_seed = 18446744073709551615
window_ps = 800
)");
    CHECK(cfg.source.pump_power_mw == 0.5);
    CHECK(cfg.source.n_channels == 2);
    CHECK(cfg.source.crosstalk_db == -20);
    CHECK(cfg.position == SwitchPosition::Bottom);
    CHECK(cfg.detectors.at("bob").efficiency_at(785) == 1.0);
    CHECK(cfg.detectors.at("bob").dark_rate_cps == 50);
    CHECK(cfg.routes.at("alice.idler").loss_db == 3.5);
    CHECK(!cfg.routes.at("alice.idler").propagation_delay_ps);
    CHECK(cfg.duration_s == 0.002);
    CHECK(cfg.master_seed == 18446744073709551615ULL);
    CHECK(cfg.coincidence.window_ps == 800);
}

TEST_CASE("preset applies before the other keys of its section") {
    const auto cfg = parse_scenario("[detectors.alice]\njitter_ps = 20\npreset = ideal\n");
    CHECK(cfg.detectors.at("alice").jitter_ps == 20);
    CHECK(cfg.detectors.at("alice").efficiency_at(1550) == 1.0);
}

TEST_CASE("errors carry the field path") {
    CHECK(path_of("[source]\npump_power = 1\n") == "source.pump_power");
    CHECK(path_of("[source]\npump_power_mw = lots\n") == "source.pump_power_mw");
    CHECK(path_of("[detectors.eve]\npreset = ideal\n") == "detectors.eve");
    CHECK(path_of("[channels.alice.sideways]\nloss_db = 1\n") == "channels.alice.sideways");
    CHECK(path_of("[detectors.bob]\nbands = 700-800\n") == "detectors.bob.bands");
    CHECK(path_of("[weather]\nrain = 1\n") == "weather");
    CHECK(path_of("[network]\nswitch = sideways\n") != "<no error>");
    CHECK(path_of("[run]\nduration_s = 1\nduration_s = 2\n") == "config");
    CHECK(path_of("[run\n") == "config");
    CHECK_THROWS_AS(load_scenario("/nonexistent/qnet.ini"), ValidationError);
}

TEST_CASE("format and parse round trip") {
    ScenarioConfig cfg = ScenarioConfig::defaults();
    cfg.source.pump_power_mw = 0.123456789012345;
    cfg.source.crosstalk_db = -23.5;
    cfg.position = SwitchPosition::Middle;
    cfg.detectors["bob"].bands = {{700, 800, 0.3}, {1500, 1600, 0.9}};
    cfg.routes["bob.idler"].extra_jitter_ps = 1.7;
    cfg.master_seed = 987654321;
    const std::string text = format_scenario(cfg);
    const ScenarioConfig back = parse_scenario(text);
    CHECK(format_scenario(back) == text);
    CHECK(back.source.pump_power_mw == cfg.source.pump_power_mw);
    CHECK(back.detectors.at("bob").bands.size() == 2);
    CHECK(back.routes.at("bob.idler").extra_jitter_ps == 1.7);
    CHECK(std::isinf(parse_scenario(format_scenario(ScenarioConfig::defaults())).source.crosstalk_db));
}

TEST_CASE("apply_setting uses the same keys as the file") {
    ScenarioConfig cfg = ScenarioConfig::defaults();
    apply_setting(cfg, "source", "pump_power_mw", "2.5");
    CHECK(cfg.source.pump_power_mw == 2.5);
    apply_setting(cfg, "ftm", "group_index", "1.5");
    CHECK(cfg.ftm.group_index == 1.5);
    CHECK_THROWS_AS(apply_setting(cfg, "source", "nope", "1"), ValidationError);
}

TEST_CASE("inline comments are ignored") {
    const auto cfg = parse_scenario("[source] ; pair source\npump_power_mw = 0.25   ; mW\n; whole line\n[run]\nmaster_seed = 9\n");
    CHECK(cfg.source.pump_power_mw == 0.25);
    CHECK(cfg.master_seed == 9);
}
