#include "qnet/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qnet/error.hpp"

namespace qnet {

ScenarioConfig ScenarioConfig::defaults() {
    ScenarioConfig cfg;
    cfg.detectors["satellite"] = DetectorSpec::si_apd();
    for (const char* user : {"alice", "bob", "charlie", "dana"}) cfg.detectors[user] = DetectorSpec::snspd();
    return cfg;
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n\"");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n\"");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(std::string_view text, const std::string& path) {
    const std::string t = trim(text);
    if (t == "-inf" || t == "off") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ValidationError("expected a number, got '" + t + "'", path);
    return v;
}

std::int64_t to_int(std::string_view text, const std::string& path) {
    const std::string t = trim(text);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        // Accept integral values written in floating form, e.g. 1e6.
        const double d = to_double(t, path);
        if (d != std::floor(d) || std::abs(d) > 9e15) throw ValidationError("expected an integer, got '" + t + "'", path);
        return static_cast<std::int64_t>(d);
    }
    return v;
}

std::uint64_t to_u64(std::string_view text, const std::string& path) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ValidationError("expected an unsigned integer, got '" + t + "'", path);
    return v;
}

bool to_bool(std::string_view text, const std::string& path) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ValidationError("expected true/false, got '" + t + "'", path);
}

std::vector<EfficiencyBand> parse_bands(std::string_view text, const std::string& path) {
    std::vector<EfficiencyBand> bands;
    std::string spec = trim(text);
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dash = item.find('-');
        const auto colon = item.find(':');
        if (dash == std::string::npos || colon == std::string::npos || colon < dash)
            throw ValidationError("expected lo-hi:efficiency, got '" + item + "'", path);
        EfficiencyBand b;
        b.lo_nm = to_double(std::string_view(item).substr(0, dash), path);
        b.hi_nm = to_double(std::string_view(item).substr(dash + 1, colon - dash - 1), path);
        b.efficiency = to_double(std::string_view(item).substr(colon + 1), path);
        bands.push_back(b);
    }
    if (bands.empty()) throw ValidationError("at least one band required", path);
    return bands;
}

DetectorSpec preset(std::string_view name, const std::string& path) {
    const std::string n = trim(name);
    if (n == "si_apd") return DetectorSpec::si_apd();
    if (n == "snspd") return DetectorSpec::snspd();
    if (n == "ideal") return DetectorSpec::ideal();
    throw ValidationError("unknown preset '" + n + "' (si_apd, snspd, ideal)", path);
}

[[noreturn]] void unknown_key(const std::string& path) { throw ValidationError("unknown key", path); }

std::string shortest(double v) {
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    char buf[32];
    const auto end = std::to_chars(buf, buf + sizeof buf, v).ptr;
    return {buf, end};
}

}  // namespace

void apply_setting(ScenarioConfig& cfg, std::string_view section, std::string_view key, std::string_view value) {
    const std::string path = std::string(section) + "." + std::string(key);
    if (section == "source") {
        auto& s = cfg.source;
        if (key == "brightness") s.brightness = to_double(value, path);
        else if (key == "pump_power_mw") s.pump_power_mw = to_double(value, path);
        else if (key == "rep_rate_hz") s.rep_rate_hz = to_double(value, path);
        else if (key == "n_channels") s.n_channels = static_cast<int>(to_int(value, path));
        else if (key == "signal_center_nm") s.signal_center_nm = to_double(value, path);
        else if (key == "idler_center_nm") s.idler_center_nm = to_double(value, path);
        else if (key == "crosstalk_db") s.crosstalk_db = to_double(value, path);
        else unknown_key(path);
    } else if (section == "network") {
        if (key == "switch") cfg.position = parse_switch_position(trim(value));
        else if (key == "simultaneous_ground") cfg.simultaneous_ground = to_bool(value, path);
        else if (key == "ground_slot_pitch_ps") cfg.ground_slot_pitch_ps = to_double(value, path);
        else unknown_key(path);
    } else if (section == "ftm") {
        auto& f = cfg.ftm;
        if (key == "n_gratings") f.n_gratings = static_cast<int>(to_int(value, path));
        else if (key == "segment_length_m") f.segment_length_m = to_double(value, path);
        else if (key == "group_index") f.group_index = to_double(value, path);
        else if (key == "circulator_loss_db") f.circulator_loss_db = to_double(value, path);
        else if (key == "array_loss_db") f.array_loss_db = to_double(value, path);
        else unknown_key(path);
    } else if (section.starts_with("detectors.")) {
        const std::string node(section.substr(10));
        if (!node_index(node)) throw ValidationError("unknown node '" + node + "'", std::string(section));
        auto& d = cfg.detectors[node];
        if (key == "preset") d = preset(value, path);
        else if (key == "bands") d.bands = parse_bands(value, path);
        else if (key == "dead_time_ns") d.dead_time_ns = to_double(value, path);
        else if (key == "dark_rate_cps") d.dark_rate_cps = to_double(value, path);
        else if (key == "jitter_ps") d.jitter_ps = to_double(value, path);
        else unknown_key(path);
    } else if (section.starts_with("channels.")) {
        const std::string route(section.substr(9));
        const auto dot = route.find('.');
        const std::string node = route.substr(0, dot);
        const std::string arm = dot == std::string::npos ? "" : route.substr(dot + 1);
        if (!node_index(node) || (arm != "signal" && arm != "idler"))
            throw ValidationError("expected channels.<node>.<signal|idler>", std::string(section));
        auto& r = cfg.routes[route];
        if (key == "loss_db") r.loss_db = to_double(value, path);
        else if (key == "propagation_delay_ps") r.propagation_delay_ps = to_double(value, path);
        else if (key == "extra_jitter_ps") r.extra_jitter_ps = to_double(value, path);
        else if (key == "ftm_delay_ps") r.ftm_delay_ps = to_double(value, path);
        else unknown_key(path);
    } else if (section == "run") {
        if (key == "duration_s") cfg.duration_s = to_double(value, path);
        else if (key == "master_seed") cfg.master_seed = to_u64(value, path);
        else if (key == "window_ps") cfg.coincidence.window_ps = to_int(value, path);
        else if (key == "unmatched_slots") cfg.coincidence.unmatched_slots = static_cast<int>(to_int(value, path));
        else unknown_key(path);
    } else if (section == "qkd") {
        if (key == "q") cfg.qkd.q = to_double(value, path);
        else if (key == "f_e") cfg.qkd.f_e = to_double(value, path);
        else unknown_key(path);
    } else {
        throw ValidationError("unknown section", std::string(section));
    }
}

ScenarioConfig parse_scenario(std::string_view text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::string stripped;
    std::istringstream lines{std::string(text)};
    for (std::string line; std::getline(lines, line);) {
        // ';' opens a comment at line start or after whitespace.
        for (std::size_t i = 0; i < line.size(); ++i)
            if (line[i] == ';' && (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) {
                line.resize(i);
                break;
            }
        stripped += line;
        stripped += '\n';
    }
    std::istringstream in{stripped};
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ValidationError(e.message() + " (line " + std::to_string(e.line()) + ")", "config");
    }

    ScenarioConfig cfg = ScenarioConfig::defaults();
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ValidationError("key outside of a section", section);
        // Preset before the other keys.
        if (const auto p = body.get_optional<std::string>("preset"); p && section.starts_with("detectors."))
            apply_setting(cfg, section, "preset", *p);
        for (const auto& [key, value] : body) {
            if (key == "preset" && section.starts_with("detectors.")) continue;
            apply_setting(cfg, section, key, value.data());
        }
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file", path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string format_bands(const std::vector<EfficiencyBand>& bands) {
    std::ostringstream out;
    for (std::size_t i = 0; i < bands.size(); ++i) {
        if (i) out << ',';
        out << shortest(bands[i].lo_nm) << '-' << shortest(bands[i].hi_nm) << ':' << shortest(bands[i].efficiency);
    }
    return out.str();
}

std::string format_scenario(const ScenarioConfig& cfg) {
    std::ostringstream out;
    auto num = [&](double v) -> std::ostream& { return out << shortest(v); };
    const auto& s = cfg.source;
    out << "[source]\n";
    out << "brightness = "; num(s.brightness) << '\n';
    out << "pump_power_mw = "; num(s.pump_power_mw) << '\n';
    out << "rep_rate_hz = "; num(s.rep_rate_hz) << '\n';
    out << "n_channels = " << s.n_channels << '\n';
    out << "signal_center_nm = "; num(s.signal_center_nm) << '\n';
    out << "idler_center_nm = "; num(s.idler_center_nm) << '\n';
    out << "crosstalk_db = "; num(s.crosstalk_db) << "\n\n";

    out << "[network]\n";
    out << "switch = " << to_string(cfg.position) << '\n';
    out << "simultaneous_ground = " << (cfg.simultaneous_ground ? "true" : "false") << '\n';
    out << "ground_slot_pitch_ps = "; num(cfg.ground_slot_pitch_ps) << "\n\n";

    out << "[ftm]\n";
    out << "n_gratings = " << cfg.ftm.n_gratings << '\n';
    out << "segment_length_m = "; num(cfg.ftm.segment_length_m) << '\n';
    out << "group_index = "; num(cfg.ftm.group_index) << '\n';
    out << "circulator_loss_db = "; num(cfg.ftm.circulator_loss_db) << '\n';
    out << "array_loss_db = "; num(cfg.ftm.array_loss_db) << "\n\n";

    for (const auto& [node, d] : cfg.detectors) {
        out << "[detectors." << node << "]\n";
        out << "bands = " << format_bands(d.bands) << '\n';
        out << "dead_time_ns = "; num(d.dead_time_ns) << '\n';
        out << "dark_rate_cps = "; num(d.dark_rate_cps) << '\n';
        out << "jitter_ps = "; num(d.jitter_ps) << "\n\n";
    }
    for (const auto& [route, r] : cfg.routes) {
        out << "[channels." << route << "]\n";
        if (r.loss_db) { out << "loss_db = "; num(*r.loss_db) << '\n'; }
        if (r.propagation_delay_ps) { out << "propagation_delay_ps = "; num(*r.propagation_delay_ps) << '\n'; }
        if (r.extra_jitter_ps) { out << "extra_jitter_ps = "; num(*r.extra_jitter_ps) << '\n'; }
        if (r.ftm_delay_ps) { out << "ftm_delay_ps = "; num(*r.ftm_delay_ps) << '\n'; }
        out << '\n';
    }

    out << "[run]\n";
    out << "duration_s = "; num(cfg.duration_s) << '\n';
    out << "master_seed = " << cfg.master_seed << '\n';
    out << "window_ps = " << cfg.coincidence.window_ps << '\n';
    out << "unmatched_slots = " << cfg.coincidence.unmatched_slots << "\n\n";

    out << "[qkd]\n";
    out << "q = "; num(cfg.qkd.q) << '\n';
    out << "f_e = "; num(cfg.qkd.f_e) << '\n';
    return out.str();
}

}  // namespace qnet
