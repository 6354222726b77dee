#include "qnet/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

namespace qnet {

namespace {

// Shortest text that reads back to the same double.
struct Num {
    double v;
};

std::ostream& operator<<(std::ostream& out, Num n) {
    if (std::isnan(n.v)) return out << "nan";
    if (std::isinf(n.v)) return out << (n.v > 0 ? "inf" : "-inf");
    char buf[32];
    for (int precision = 6; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, n.v);
        if (std::strtod(buf, nullptr) == n.v) break;
    }
    return out << buf;
}

void metrics_columns(std::ostream& out, const LinkResult& l, double pump_power_mw) {
    const MetricsRecord& m = l.metrics;
    out << l.link << ',' << Num{pump_power_mw} << ',' << l.n_channels << ',' << l.car.matched << ','
        << Num{l.car.unmatched_mean()} << ',' << Num{m.car} << ',' << Num{m.car_error} << ','
        << to_string(m.car_flag) << ',' << Num{m.visibility} << ',' << (m.visibility_clamped ? 1 : 0) << ','
        << Num{m.qber} << ',' << Num{m.gain} << ',' << Num{m.skr_per_pulse} << ',' << Num{m.skr_per_second}
        << '\n';
}

constexpr std::string_view kMetricsHeader =
    "link,pump_power_mw,n_channels,matched,unmatched_mean,car,car_err,car_flag,visibility,visibility_clamped,"
    "qber,gain,skr_per_pulse,skr_per_s";

}  // namespace

std::string_view to_string(CarFlag flag) {
    switch (flag) {
        case CarFlag::Ok: return "ok";
        case CarFlag::Infinite: return "infinite";
        case CarFlag::Undefined: return "undefined";
    }
    return "?";
}

void write_csv_preamble(std::ostream& out, std::optional<std::uint64_t> seed) {
    out << "# qnet " << kVersion << " seed=";
    if (seed) out << *seed;
    else out << "none";
    out << '\n';
}

void write_metrics_csv(std::ostream& out, std::span<const LinkResult> links, double pump_power_mw,
                       std::uint64_t seed) {
    write_csv_preamble(out, seed);
    out << kMetricsHeader << '\n';
    for (const auto& l : links) metrics_columns(out, l, pump_power_mw);
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows, std::uint64_t master_seed) {
    write_csv_preamble(out, master_seed);
    out << "parameter,value,repetition,seed," << kMetricsHeader << '\n';
    for (const auto& r : rows) {
        out << r.parameter << ',' << r.value << ',' << r.repetition << ',' << r.seed << ',';
        metrics_columns(out, r.result, r.pump_power_mw);
    }
}

void write_histogram_csv(std::ostream& out, std::span<const LinkResult> links, std::uint64_t seed) {
    write_csv_preamble(out, seed);
    out << "link,offset_ps,count\n";
    for (const auto& l : links)
        for (std::size_t k = 0; k < l.histogram.counts.size(); ++k)
            out << l.link << ',' << l.histogram.offsets[k] << ',' << l.histogram.counts[k] << '\n';
}

void write_tradeoff_csv(std::ostream& out, const TradeoffCurve& curve) {
    write_csv_preamble(out, std::nullopt);
    out << "rep_rate_hz,n_channels,per_channel_rate,total_rate,per_channel_coincidence_rate,car,best\n";
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        const auto& p = curve.points[i];
        out << Num{p.rep_rate_hz} << ',' << p.n_channels << ',' << Num{p.per_channel_rate} << ','
            << Num{p.total_rate} << ',' << Num{p.per_channel_coincidence_rate} << ',' << Num{p.car} << ','
            << (i == curve.best ? 1 : 0) << '\n';
    }
}

void write_jsi_csv(std::ostream& out, const JsiGrid& jsi) {
    write_csv_preamble(out, std::nullopt);
    out << "signal_nm\\idler_nm";
    for (double x : jsi.idler_axis_nm) out << ',' << Num{x};
    out << '\n';
    for (std::size_t r = 0; r < jsi.rows(); ++r) {
        out << Num{jsi.signal_axis_nm[r]};
        for (std::size_t c = 0; c < jsi.cols(); ++c) out << ',' << Num{jsi.at(r, c)};
        out << '\n';
    }
}

void write_crosstalk_csv(std::ostream& out, std::span<const double> matrix, std::size_t n) {
    write_csv_preamble(out, std::nullopt);
    out << "signal_channel,idler_channel,crosstalk_db\n";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out << i + 1 << ',' << j + 1 << ',' << Num{matrix[i * n + j]} << '\n';
}

void write_topology_csv(std::ostream& out, const ConnectivityGraph& graph) {
    write_csv_preamble(out, std::nullopt);
    out << "mode,link,channel,signal_node,idler_node,signal_nm,idler_nm\n";
    for (const Edge& e : graph.edges)
        for (const LinkChannel& c : e.channels) {
            const ChannelPair* p = graph.channel(c.channel);
            out << to_string(graph.mode) << ',' << e.name() << ',' << c.channel << ',' << c.signal_node << ','
                << c.idler_node << ',' << Num{p ? p->signal_nm : NAN} << ',' << Num{p ? p->idler_nm : NAN} << '\n';
        }
}

}  // namespace qnet
