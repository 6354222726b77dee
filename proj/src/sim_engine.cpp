#include "qnet/sim_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "qnet/error.hpp"
#include "qnet/random.hpp"

namespace qnet {

namespace {

constexpr std::int64_t kBlockPulses = std::int64_t{1} << 22;

enum Stream : std::uint64_t { kPairs = 1, kTransport = 2, kDetect = 3 };

Picoseconds positive_mod(Picoseconds a, Picoseconds m) {
    const Picoseconds r = a % m;
    return r < 0 ? r + m : r;
}

thread_local bool t_in_pool = false;

// Nested calls run serially on the calling worker.
template <class F>
void parallel_for(std::size_t n, F&& body) {
    const std::size_t workers = t_in_pool ? 1 : std::min<std::size_t>(n, worker_threads());
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            t_in_pool = true;
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

ChannelSpec default_route_spec(const ScenarioConfig& cfg, NetworkMode mode, const std::string& node, Arm arm) {
    const std::string id = node + "." + std::string(to_string(arm));
    ChannelSpec spec;
    spec.loss_db = path_loss(id, mode).optical_db();
    if (mode == NetworkMode::Satellite && node == "satellite") {
        spec.loss_db += cfg.ftm.circulator_loss_db + cfg.ftm.array_loss_db - FtmSpec{}.circulator_loss_db -
                        FtmSpec{}.array_loss_db;
        spec.ftm_delay_ps = ftm_delay(1, cfg.ftm);
    } else if (mode == NetworkMode::Ground) {
        spec.ftm_delay_ps = cfg.ground_slot_pitch_ps;
    }
    if (const auto it = cfg.routes.find(id); it != cfg.routes.end()) {
        const RouteOverride& o = it->second;
        if (o.loss_db) spec.loss_db = *o.loss_db;
        if (o.propagation_delay_ps) spec.propagation_delay_ps = *o.propagation_delay_ps;
        if (o.extra_jitter_ps) spec.extra_jitter_ps = *o.extra_jitter_ps;
        if (o.ftm_delay_ps) spec.ftm_delay_ps = *o.ftm_delay_ps;
    }
    return spec;
}

Picoseconds nominal_offset(const ChannelSpec& spec, int channel) {
    return std::llround(spec.propagation_delay_ps + channel * spec.ftm_delay_ps);
}

// Tags within window/2 of `offset` modulo the period.
std::vector<TimeTag> gate(const std::vector<TimeTag>& tags, Picoseconds offset, Picoseconds window,
                          Picoseconds period) {
    return std::move(demux_time_slots(tags, positive_mod(offset, period), period, 1, window, period)[0]);
}

}  // namespace

unsigned worker_threads() {
    if (const char* env = std::getenv("QNET_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

ScenarioPlan plan_scenario(const ScenarioConfig& cfg) {
    std::vector<std::string> problems;
    auto check = [&](auto&& fn, const std::string& path) {
        try {
            fn();
        } catch (const ValidationError& e) {
            // Per-node specs report field names relative to their section.
            if (e.path().empty()) problems.push_back(path + ": " + e.what());
            else if (e.path().find('.') == std::string::npos) problems.push_back(path + "." + e.what());
            else problems.push_back(e.what());
        }
    };
    auto fail_if_any = [&] {
        if (problems.empty()) return;
        std::string msg;
        for (const auto& p : problems) msg += (msg.empty() ? "" : "\n") + p;
        throw ValidationError(msg, problems.size() == 1 ? "" : "config");
    };

    check([&] { cfg.source.validate(); }, "source");
    check([&] { cfg.ftm.validate(); }, "ftm");
    check([&] { cfg.qkd.validate(); }, "qkd");
    check([&] { require(cfg.source.n_channels <= 4, "at most 4 channels are allocated"); }, "source.n_channels");
    check([&] { require(cfg.duration_s > 0.0, "must be > 0"); }, "run.duration_s");
    check([&] { require(cfg.coincidence.unmatched_slots >= 1, "must be >= 1"); }, "run.unmatched_slots");
    check([&] { require(cfg.ground_slot_pitch_ps >= 0.0, "must be >= 0"); }, "network.ground_slot_pitch_ps");
    for (const auto& [node, det] : cfg.detectors)
        check([&] { det.validate(); }, "detectors." + node);
    fail_if_any();

    ScenarioPlan plan;
    plan.period_ps = pulse_period_ps(cfg.source);
    check(
        [&] {
            require(cfg.coincidence.window_ps > 0 && 2 * cfg.coincidence.window_ps <= plan.period_ps,
                    "window must be in (0, period / 2]");
        },
        "run.window_ps");
    const double pulses = std::round(cfg.duration_s * cfg.source.rep_rate_hz);
    check([&] { require(pulses >= 1.0 && pulses < 9e15, "run covers no pulse or too many"); }, "run.duration_s");
    fail_if_any();
    plan.n_pulses = static_cast<std::int64_t>(pulses);

    const ConnectivityGraph graph = cfg.simultaneous_ground ? simultaneous_ground() : connectivity(cfg.position);
    plan.mode = graph.mode;
    for (const auto& v : validate_allocation(graph)) problems.push_back("network: " + v.message);
    fail_if_any();

    // Routes per (node, arm, channel) for the active channels.
    auto find_route = [&](const std::string& node, Arm arm, int channel) -> const Route* {
        for (const auto& r : plan.routes)
            if (r.node == node && r.arm == arm && r.channel == channel) return &r;
        return nullptr;
    };
    auto add_route = [&](const std::string& node, Arm arm, int channel) -> Picoseconds {
        if (const Route* r = find_route(node, arm, channel)) return r->offset_ps;
        const ChannelPair* pair = graph.channel(channel + 1);
        Route r;
        r.node = node;
        r.arm = arm;
        r.channel = channel;
        r.wavelength_nm = arm == Arm::Signal ? pair->signal_nm : pair->idler_nm;
        check([&] { r.spec = default_route_spec(cfg, graph.mode, node, arm); }, "channels." + node);
        check([&] { r.spec.validate(); }, "channels." + node + "." + std::string(to_string(arm)));
        r.offset_ps = nominal_offset(r.spec, channel);
        plan.routes.push_back(r);
        return r.offset_ps;
    };
    for (const Edge& edge : graph.edges) {
        LinkPlan link;
        link.name = edge.name();
        for (const LinkChannel& lc : edge.channels) {
            const int ch = lc.channel - 1;
            if (ch >= cfg.source.n_channels) continue;
            LinkChannelPlan c;
            c.channel = ch;
            c.signal_node = lc.signal_node;
            c.idler_node = lc.idler_node;
            c.signal_offset_ps = add_route(lc.signal_node, Arm::Signal, ch);
            c.idler_offset_ps = add_route(lc.idler_node, Arm::Idler, ch);
            link.channels.push_back(c);
        }
        if (!link.channels.empty()) plan.links.push_back(std::move(link));
    }
    fail_if_any();

    for (const auto& [route, o] : cfg.routes) {
        const std::string node = route.substr(0, route.find('.'));
        const bool used = std::any_of(plan.routes.begin(), plan.routes.end(), [&](const Route& r) {
            return r.node + "." + std::string(to_string(r.arm)) == route;
        });
        if (!used) problems.push_back("channels." + route + ": route is not part of the active topology");
    }

    Picoseconds max_offset = 0;
    for (std::string_view node : kNodes) {
        std::vector<const Route*> here;
        for (const auto& r : plan.routes)
            if (r.node == node) here.push_back(&r);
        if (here.empty()) continue;
        plan.nodes.emplace_back(node);
        const auto det = cfg.detectors.find(std::string(node));
        if (det == cfg.detectors.end()) {
            problems.push_back("detectors." + std::string(node) + ": no detector configured");
            continue;
        }
        for (const Route* r : here) {
            max_offset = std::max(max_offset, r->offset_ps);
            if (!det->second.efficiency_at(r->wavelength_nm))
                problems.push_back("detectors." + std::string(node) + ".bands: no band covers " +
                                   std::to_string(r->wavelength_nm) + " nm");
        }
        // Channels sharing a detector must land in distinct gates.
        for (std::size_t a = 0; a < here.size(); ++a)
            for (std::size_t b = a + 1; b < here.size(); ++b) {
                const Picoseconds d = positive_mod(here[a]->offset_ps - here[b]->offset_ps, plan.period_ps);
                if (std::min(d, plan.period_ps - d) < cfg.coincidence.window_ps)
                    problems.push_back("detectors." + std::string(node) + ": time slots of channels " +
                                       std::to_string(here[a]->channel + 1) + " and " +
                                       std::to_string(here[b]->channel + 1) +
                                       " alias within the coincidence window");
            }
    }
    fail_if_any();

    plan.duration_ps = plan.n_pulses * plan.period_ps + max_offset + plan.period_ps;
    return plan;
}

TagSet simulate_tags(const ScenarioConfig& cfg, const ScenarioPlan& plan) {
    // Route lookup per (arm, channel); pairs on channels without a route are lost.
    std::vector<int> signal_route(static_cast<std::size_t>(cfg.source.n_channels), -1);
    std::vector<int> idler_route(static_cast<std::size_t>(cfg.source.n_channels), -1);
    for (std::size_t i = 0; i < plan.routes.size(); ++i) {
        const Route& r = plan.routes[i];
        (r.arm == Arm::Signal ? signal_route : idler_route)[static_cast<std::size_t>(r.channel)] = static_cast<int>(i);
    }
    std::map<std::string, std::size_t> node_slot;
    for (std::size_t i = 0; i < plan.nodes.size(); ++i) node_slot[plan.nodes[i]] = i;

    std::vector<std::vector<Photon>> arrivals(plan.nodes.size());
    std::vector<std::vector<Photon>> outgoing(plan.routes.size());
    const std::uint64_t seed = cfg.master_seed;
    const auto n_blocks = static_cast<std::uint64_t>((plan.n_pulses + kBlockPulses - 1) / kBlockPulses);
    for (std::uint64_t b = 0; b < n_blocks; ++b) {
        const std::int64_t first = static_cast<std::int64_t>(b) * kBlockPulses;
        const std::int64_t count = std::min(kBlockPulses, plan.n_pulses - first);
        const auto pairs = sample_pairs(cfg.source, count, derive_seed(seed, kPairs, b + 1), first);

        for (auto& o : outgoing) o.clear();
        for (const PairEvent& e : pairs) {
            if (const int r = signal_route[static_cast<std::size_t>(e.channel_index)]; r >= 0)
                outgoing[static_cast<std::size_t>(r)].push_back(
                    {e.emission_time_ps, e.channel_index, plan.routes[static_cast<std::size_t>(r)].wavelength_nm});
            if (const int r = idler_route[static_cast<std::size_t>(e.idler_channel)]; r >= 0)
                outgoing[static_cast<std::size_t>(r)].push_back(
                    {e.emission_time_ps, e.idler_channel, plan.routes[static_cast<std::size_t>(r)].wavelength_nm});
        }
        std::vector<std::vector<Photon>> delivered(plan.routes.size());
        const std::uint64_t block_seed = derive_seed(seed, kTransport, b + 1);
        parallel_for(plan.routes.size(), [&](std::size_t r) {
            delivered[r] = propagate(outgoing[r], plan.routes[r].spec, derive_seed(block_seed, r + 1));
        });
        for (std::size_t r = 0; r < plan.routes.size(); ++r) {
            auto& dst = arrivals[node_slot.at(plan.routes[r].node)];
            dst.insert(dst.end(), delivered[r].begin(), delivered[r].end());
        }
    }

    std::vector<std::vector<TimeTag>> tags(plan.nodes.size());
    parallel_for(plan.nodes.size(), [&](std::size_t i) {
        const auto id = static_cast<std::uint32_t>(*node_index(plan.nodes[i]));
        tags[i] = detect(arrivals[i], cfg.detectors.at(plan.nodes[i]), plan.duration_ps, id,
                         derive_seed(seed, kDetect, id + 1));
    });
    TagSet out;
    for (std::size_t i = 0; i < plan.nodes.size(); ++i) out[plan.nodes[i]] = std::move(tags[i]);
    return out;
}

std::vector<LinkResult> analyze_tags(const ScenarioConfig& cfg, const ScenarioPlan& plan, const TagSet& tags) {
    static const std::vector<TimeTag> kNone;
    auto tags_of = [&](const std::string& node) -> const std::vector<TimeTag>& {
        const auto it = tags.find(node);
        return it == tags.end() ? kNone : it->second;
    };
    const Picoseconds window = cfg.coincidence.window_ps;
    const int n_slots = cfg.coincidence.unmatched_slots;
    const Picoseconds bin = std::max<Picoseconds>(1, window / 4);
    const Picoseconds span = n_slots * plan.period_ps + plan.period_ps / 2;

    std::vector<LinkResult> results(plan.links.size());
    parallel_for(plan.links.size(), [&](std::size_t l) {
        const LinkPlan& link = plan.links[l];
        LinkResult& res = results[l];
        res.link = link.name;
        res.n_channels = static_cast<int>(link.channels.size());
        std::uint64_t matched = 0;
        std::uint64_t unmatched = 0;
        for (const LinkChannelPlan& c : link.channels) {
            const auto sig = gate(tags_of(c.signal_node), c.signal_offset_ps, window, plan.period_ps);
            auto idl = gate(tags_of(c.idler_node), c.idler_offset_ps, window, plan.period_ps);
            const Picoseconds expected = c.idler_offset_ps - c.signal_offset_ps;
            const CarResult car = car_from_tags(sig, idl, plan.period_ps, window, expected, n_slots);
            matched += car.matched;
            unmatched += car.unmatched_total;

            for (auto& t : idl) t.time_ps -= expected;
            const CoincidenceHistogram h = histogram(sig, idl, bin, span);
            if (res.histogram.counts.empty()) res.histogram = h;
            else
                for (std::size_t k = 0; k < h.counts.size(); ++k) res.histogram.counts[k] += h.counts[k];
        }
        res.car = finalize_car(matched, unmatched, 2 * n_slots);
        res.metrics = metrics_from_car(res.car, static_cast<double>(plan.n_pulses), cfg.source.rep_rate_hz, cfg.qkd);
    });

    if (!results.empty()) {
        LinkResult all;
        all.link = kAllLinks;
        std::uint64_t matched = 0;
        std::uint64_t unmatched = 0;
        for (const auto& r : results) {
            all.n_channels += r.n_channels;
            matched += r.car.matched;
            unmatched += r.car.unmatched_total;
            if (all.histogram.counts.empty()) all.histogram = r.histogram;
            else
                for (std::size_t k = 0; k < r.histogram.counts.size(); ++k)
                    all.histogram.counts[k] += r.histogram.counts[k];
        }
        all.car = finalize_car(matched, unmatched, 2 * n_slots);
        all.metrics = metrics_from_car(all.car, static_cast<double>(plan.n_pulses), cfg.source.rep_rate_hz, cfg.qkd);
        results.push_back(std::move(all));
    }
    return results;
}

RunResult run_scenario(const ScenarioConfig& cfg) {
    RunResult run;
    run.plan = plan_scenario(cfg);
    run.tags = simulate_tags(cfg, run.plan);
    run.links = analyze_tags(cfg, run.plan, run.tags);
    return run;
}

std::vector<SweepRow> sweep(const ScenarioConfig& cfg, const SweepSpec& spec) {
    require(!spec.values.empty(), "value list must not be empty", "sweep.values");
    require(spec.repetitions >= 1, "must be >= 1", "sweep.repetitions");
    const auto dot = spec.parameter.rfind('.');
    require(dot != std::string::npos && dot > 0 && dot + 1 < spec.parameter.size(),
            "expected <section>.<key>", "sweep.parameter");
    const std::string section = spec.parameter.substr(0, dot);
    const std::string key = spec.parameter.substr(dot + 1);

    // Resolve every value and validate each cell before running anything.
    std::vector<ScenarioConfig> cells;
    for (const auto& value : spec.values) {
        ScenarioConfig c = cfg;
        apply_setting(c, section, key, value);
        plan_scenario(c);
        for (int r = 0; r < spec.repetitions; ++r) {
            ScenarioConfig cell = c;
            cell.master_seed = derive_seed(cfg.master_seed, cells.size());
            cells.push_back(std::move(cell));
        }
    }

    std::vector<std::vector<LinkResult>> results(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        const ScenarioPlan plan = plan_scenario(cells[i]);
        results[i] = analyze_tags(cells[i], plan, simulate_tags(cells[i], plan));
    });

    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (auto& link : results[i]) {
            SweepRow row;
            row.parameter = spec.parameter;
            row.value = spec.values[i / static_cast<std::size_t>(spec.repetitions)];
            row.repetition = static_cast<int>(i % static_cast<std::size_t>(spec.repetitions));
            row.seed = cells[i].master_seed;
            row.pump_power_mw = cells[i].source.pump_power_mw;
            row.result = std::move(link);
            rows.push_back(std::move(row));
        }
    return rows;
}

}  // namespace qnet
