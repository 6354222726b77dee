#include "qnet/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "qnet/error.hpp"
#include "qnet/planner.hpp"
#include "qnet/report.hpp"
#include "qnet/scenario.hpp"
#include "qnet/sim_engine.hpp"
#include "qnet/source_model.hpp"
#include "qnet/tag_io.hpp"

namespace qnet::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
    std::string config;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::string switch_position;
    std::string format = "csv";
};

void add_common(CLI::App& cmd, Common& c, bool with_config) {
    if (with_config) cmd.add_option("--config", c.config, "scenario file (defaults when omitted)");
    cmd.add_option("--out", c.out_dir, "output directory");
    cmd.add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv"}));
}

void add_scenario_overrides(CLI::App& cmd, Common& c) {
    cmd.add_option("--seed", c.seed, "master seed override");
    cmd.add_option("--switch", c.switch_position, "switch position")->check(CLI::IsMember({"top", "middle", "bottom"}));
}

ScenarioConfig load_config(const Common& c) {
    ScenarioConfig cfg = c.config.empty() ? ScenarioConfig::defaults() : load_scenario(c.config);
    if (c.seed) cfg.master_seed = *c.seed;
    if (!c.switch_position.empty()) cfg.position = parse_switch_position(c.switch_position);
    return cfg;
}

fs::path prepare_out(const std::string& dir) {
    const fs::path p = dir.empty() ? fs::path(".") : fs::path(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw IoError("cannot create output directory " + p.string() + ": " + ec.message());
    return p;
}

template <class Writer>
void write_text(const fs::path& path, Writer&& writer) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    writer(f);
    f.flush();
    if (!f) throw IoError("write failed: " + path.string());
}

// Output goes to <out>/<name> when --out is given, else to stdout.
template <class Writer>
void emit(const Common& c, std::string_view name, std::ostream& out, Writer&& writer) {
    if (c.out_dir.empty()) {
        writer(out);
        return;
    }
    write_text(prepare_out(c.out_dir) / name, writer);
}

void write_manifest(const fs::path& path, const ScenarioConfig& cfg, const ScenarioPlan& plan) {
    write_text(path, [&](std::ostream& f) {
        f << "; qnet " << kVersion << "\n; seed=" << cfg.master_seed << "\n; pulses=" << plan.n_pulses
          << "\n; files:";
        for (const auto& node : plan.nodes) f << " tags_" << node << ".bin";
        f << " metrics.csv histogram.csv\n\n" << format_scenario(cfg);
    });
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) items.push_back(item);
    return items;
}

std::string node_for_tag_file(const fs::path& file, const std::vector<TimeTag>& tags) {
    const std::string stem = file.stem().string();
    if (stem.starts_with("tags_") && node_index(stem.substr(5))) return stem.substr(5);
    if (!tags.empty() && tags.front().detector_id < kNodeCount) return std::string(kNodes[tags.front().detector_id]);
    throw ValidationError("cannot tell which node recorded this file (name it tags_<node>.bin)", file.string());
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multiplexed entanglement-distribution network simulator", "qnet"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    Common common;

    auto* simulate = app.add_subcommand("simulate", "run a scenario and write tags, metrics and a manifest");
    add_common(*simulate, common, true);
    add_scenario_overrides(*simulate, common);

    std::vector<std::string> tag_files;
    auto* analyze = app.add_subcommand("analyze", "coincidence analysis of recorded tag files");
    add_common(*analyze, common, true);
    add_scenario_overrides(*analyze, common);
    analyze->add_option("tags", tag_files, "tag files (tags_<node>.bin)")->required();

    SweepSpec sweep_spec;
    sweep_spec.parameter = "source.pump_power_mw";
    std::string values_text;
    std::string log_range;
    auto* sweep_cmd = app.add_subcommand("sweep", "sweep one configuration key");
    add_common(*sweep_cmd, common, true);
    add_scenario_overrides(*sweep_cmd, common);
    sweep_cmd->add_option("--param", sweep_spec.parameter, "<section>.<key>")->capture_default_str();
    auto* values_opt = sweep_cmd->add_option("--values", values_text, "comma-separated values");
    sweep_cmd->add_option("--log", log_range, "lo:hi:points, log-spaced")->excludes(values_opt);
    sweep_cmd->add_option("--reps", sweep_spec.repetitions, "repetitions per value")->capture_default_str();

    SourceSpec plan_source;
    double plan_loss_db = 30.0;
    double dead_time_ns = 1000.0;
    double dark_cps = 1000.0;
    double jitter_ps = 130.0;
    double min_mhz = 1.0;
    double max_mhz = 500.0;
    int points = 200;
    bool no_jitter_bound = false;
    std::string objective = "skr";
    PlannerOptions plan_options;
    auto* plan = app.add_subcommand("plan", "repetition rate vs channel count trade-off");
    add_common(*plan, common, false);
    plan->add_option("--pump-mw", plan_source.pump_power_mw, "pump power (mW)")->capture_default_str();
    plan->add_option("--brightness", plan_source.brightness, "pairs / s / mW")->capture_default_str();
    plan->add_option("--loss-db", plan_loss_db, "signal arm loss (dB)")->capture_default_str();
    plan->add_option("--idler-loss-db", plan_options.idler_loss_db, "idler arm loss (dB)")->capture_default_str();
    plan->add_option("--dead-time-ns", dead_time_ns, "detector dead time")->capture_default_str();
    plan->add_option("--dark-cps", dark_cps, "detector dark count rate")->capture_default_str();
    plan->add_option("--jitter-ps", jitter_ps, "detector timing jitter")->capture_default_str();
    plan->add_option("--window-ps", plan_options.window_ps, "coincidence window")->capture_default_str();
    plan->add_option("--min-mhz", min_mhz, "lowest repetition rate")->capture_default_str();
    plan->add_option("--max-mhz", max_mhz, "highest repetition rate")->capture_default_str();
    plan->add_option("--points", points, "grid points")->capture_default_str();
    plan->add_option("--capacity", plan_options.spectral_capacity, "spectral channel capacity")->capture_default_str();
    plan->add_flag("--no-jitter-bound", no_jitter_bound, "ignore the jitter limit on channel count");
    plan->add_option("--objective", objective, "skr or coincidences")->capture_default_str()
        ->check(CLI::IsMember({"skr", "coincidences"}));

    std::string topo_switch = "top";
    bool simultaneous = false;
    bool losses = false;
    auto* topology = app.add_subcommand("topology", "list links and channel allocation");
    add_common(*topology, common, false);
    topology->add_option("--switch", topo_switch, "switch position")->capture_default_str()
        ->check(CLI::IsMember({"top", "middle", "bottom"}));
    topology->add_flag("--simultaneous", simultaneous, "all ground links at once");
    topology->add_flag("--losses", losses, "print per-route loss budgets instead");

    JsiSpec jsi_spec = JsiSpec::integrated_design();
    int pump_n = 4;
    double pump_width = 0.25;
    double pump_gap = 0.25;
    double pump_center = 521.4;
    auto* jsi = app.add_subcommand("jsi", "joint spectral intensity and channel cross-talk");
    add_common(*jsi, common, false);
    jsi->add_option("--channels", pump_n, "pump channels")->capture_default_str();
    jsi->add_option("--width-nm", pump_width, "pump channel width")->capture_default_str();
    jsi->add_option("--gap-nm", pump_gap, "gap between pump channels")->capture_default_str();
    jsi->add_option("--pump-nm", pump_center, "pump centre")->capture_default_str();
    jsi->add_option("--pm-bandwidth-nm", jsi_spec.phasematch_bandwidth_nm, "phase-matching bandwidth")->capture_default_str();
    jsi->add_option("--resolution", jsi_spec.grid_resolution, "grid points per axis")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*simulate) {
            const ScenarioConfig cfg = load_config(common);
            const RunResult run = run_scenario(cfg);
            const fs::path dir = prepare_out(common.out_dir);
            for (const auto& [node, tags] : run.tags) tag_io::write_file(dir / ("tags_" + node + ".bin"), tags);
            write_text(dir / "metrics.csv", [&](std::ostream& f) {
                write_metrics_csv(f, run.links, cfg.source.pump_power_mw, cfg.master_seed);
            });
            write_text(dir / "histogram.csv",
                       [&](std::ostream& f) { write_histogram_csv(f, run.links, cfg.master_seed); });
            write_manifest(dir / "manifest.txt", cfg, run.plan);
            for (const auto& l : run.links)
                out << l.link << ": CAR " << l.metrics.car << " +- " << l.metrics.car_error << " ("
                    << to_string(l.metrics.car_flag) << "), QBER " << l.metrics.qber << '\n';
        } else if (*analyze) {
            const ScenarioConfig cfg = load_config(common);
            const ScenarioPlan plan = plan_scenario(cfg);
            TagSet tags;
            for (const auto& file : tag_files) {
                auto t = tag_io::read_file(file);
                const std::string node = node_for_tag_file(file, t);
                if (tags.count(node)) throw ValidationError("two tag files for node " + node, file);
                tags[node] = std::move(t);
            }
            const auto links = analyze_tags(cfg, plan, tags);
            emit(common, "metrics.csv", out, [&](std::ostream& f) {
                write_metrics_csv(f, links, cfg.source.pump_power_mw, cfg.master_seed);
            });
            if (!common.out_dir.empty())
                write_text(fs::path(common.out_dir) / "histogram.csv",
                           [&](std::ostream& f) { write_histogram_csv(f, links, cfg.master_seed); });
        } else if (*sweep_cmd) {
            const ScenarioConfig cfg = load_config(common);
            if (!log_range.empty()) {
                std::stringstream ss(log_range);
                std::string lo, hi, n;
                std::getline(ss, lo, ':');
                std::getline(ss, hi, ':');
                std::getline(ss, n, ':');
                try {
                    for (double v : log_grid(std::stod(lo), std::stod(hi), std::stoi(n))) {
                        std::ostringstream text;
                        text.precision(17);
                        text << v;
                        sweep_spec.values.push_back(text.str());
                    }
                } catch (const std::logic_error&) {
                    throw ValidationError("expected lo:hi:points", "--log");
                }
            } else {
                sweep_spec.values = split_list(values_text);
            }
            const auto rows = sweep(cfg, sweep_spec);
            emit(common, "sweep.csv", out, [&](std::ostream& f) { write_sweep_csv(f, rows, cfg.master_seed); });
        } else if (*plan) {
            DetectorSpec det = DetectorSpec::ideal();
            det.dead_time_ns = dead_time_ns;
            det.dark_rate_cps = dark_cps;
            det.jitter_ps = jitter_ps;
            plan_options.jitter_bound = !no_jitter_bound;
            plan_options.objective =
                objective == "skr" ? PlanObjective::SecureKeyRate : PlanObjective::CoincidenceRate;
            const auto curve =
                optimize_rep_rate(plan_source, det, plan_loss_db, log_grid(min_mhz * 1e6, max_mhz * 1e6, points),
                                  plan_options);
            emit(common, "tradeoff.csv", out, [&](std::ostream& f) { write_tradeoff_csv(f, curve); });
            if (!common.out_dir.empty()) {
                const auto& b = curve.points[curve.best];
                out << "best: " << b.rep_rate_hz / 1e6 << " MHz, " << b.n_channels << " channels, total "
                    << b.total_rate << '\n';
            }
        } else if (*topology) {
            const auto graph = simultaneous ? simultaneous_ground() : connectivity(parse_switch_position(topo_switch));
            if (losses) {
                emit(common, "losses.csv", out, [&](std::ostream& f) {
                    write_csv_preamble(f, std::nullopt);
                    f << "route,component,loss_db,detection\n";
                    std::vector<std::string> seen;
                    for (const auto& e : graph.edges)
                        for (const auto& c : e.channels)
                            for (const auto& route : {c.signal_node + ".signal", c.idler_node + ".idler"}) {
                                if (std::find(seen.begin(), seen.end(), route) != seen.end()) continue;
                                seen.push_back(route);
                                const auto budget = path_loss(route, graph.mode);
                                for (const auto& item : budget.items)
                                    f << route << ',' << item.component << ',' << item.loss_db << ','
                                      << (item.detection ? 1 : 0) << '\n';
                                f << route << ",total," << budget.total_db() << ",0\n";
                            }
                });
            } else {
                emit(common, "topology.csv", out, [&](std::ostream& f) { write_topology_csv(f, graph); });
            }
            const auto violations = validate_allocation(graph);
            for (const auto& v : violations) err << "violation: " << v.message << '\n';
            if (!violations.empty()) return 2;
        } else if (*jsi) {
            jsi_spec.pump_channels = layout_pump_channels(pump_center, pump_n, pump_width, pump_gap);
            const JsiGrid grid = compute_jsi(jsi_spec);
            const auto matrix = crosstalk_matrix(grid, channel_bands(jsi_spec));
            const auto n = jsi_spec.pump_channels.size();
            const double worst = max_offdiagonal_db(matrix, n);
            if (common.out_dir.empty()) {
                write_crosstalk_csv(out, matrix, n);
            } else {
                const fs::path dir = prepare_out(common.out_dir);
                write_text(dir / "jsi.csv", [&](std::ostream& f) { write_jsi_csv(f, grid); });
                write_text(dir / "crosstalk.csv", [&](std::ostream& f) { write_crosstalk_csv(f, matrix, n); });
            }
            err << "max off-diagonal cross-talk: " << worst << " dB\n";
        }
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return 1;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace qnet::cli
