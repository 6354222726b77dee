#include "qnet/coincidence.hpp"

#include <cmath>
#include <limits>

#include "qnet/error.hpp"

namespace qnet {
namespace {

// floor division for a signed numerator and positive denominator
Picoseconds floor_div(Picoseconds a, Picoseconds b) {
    Picoseconds q = a / b;
    if ((a % b != 0) && (a < 0)) --q;
    return q;
}

Picoseconds positive_mod(Picoseconds a, Picoseconds m) {
    const Picoseconds r = a % m;
    return r < 0 ? r + m : r;
}

void check_sorted(std::span<const TimeTag> tags, const char* which) {
    for (std::size_t i = 1; i < tags.size(); ++i)
        require(tags[i].time_ps >= tags[i - 1].time_ps, std::string(which) + " tags must be sorted");
}

// Calls visit(delay) for every (signal, idler) pair with delay in [lo, hi).
template <typename Visit>
void sweep_pairs(std::span<const TimeTag> signal, std::span<const TimeTag> idler, Picoseconds lo, Picoseconds hi,
                 Visit&& visit) {
    std::size_t start = 0;
    for (const TimeTag& s : signal) {
        while (start < idler.size() && idler[start].time_ps - s.time_ps < lo) ++start;
        for (std::size_t j = start; j < idler.size(); ++j) {
            const Picoseconds d = idler[j].time_ps - s.time_ps;
            if (d >= hi) break;
            visit(d);
        }
    }
}

}  // namespace

std::uint64_t CoincidenceHistogram::total() const {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
}

CoincidenceHistogram histogram(std::span<const TimeTag> signal, std::span<const TimeTag> idler,
                               Picoseconds bin_width_ps, Picoseconds max_offset_ps) {
    require(bin_width_ps > 0, "bin width must be > 0");
    require(max_offset_ps >= 0, "max offset must be >= 0");
    check_sorted(signal, "signal");
    check_sorted(idler, "idler");

    const Picoseconds half_bins = (max_offset_ps + bin_width_ps - 1) / bin_width_ps;
    CoincidenceHistogram h;
    h.bin_width_ps = bin_width_ps;
    for (Picoseconds k = -half_bins; k <= half_bins; ++k) h.offsets.push_back(k * bin_width_ps);
    h.counts.assign(h.offsets.size(), 0);

    // Bin k covers [k w - w/2, k w - w/2 + w); shifting by w/2 makes it a floor.
    const Picoseconds shift = bin_width_ps / 2;
    const Picoseconds lo = -half_bins * bin_width_ps - shift;
    const Picoseconds hi = lo + static_cast<Picoseconds>(h.counts.size()) * bin_width_ps;
    sweep_pairs(signal, idler, lo, hi, [&](Picoseconds d) {
        const Picoseconds bin = floor_div(d - lo, bin_width_ps);
        ++h.counts[static_cast<std::size_t>(bin)];
    });
    return h;
}

CarResult finalize_car(std::uint64_t matched, std::uint64_t unmatched_total, int unmatched_slots) {
    CarResult r;
    r.matched = matched;
    r.unmatched_total = unmatched_total;
    r.unmatched_slots = unmatched_slots;
    const double m = static_cast<double>(matched);
    const double u = r.unmatched_mean();
    if (unmatched_total == 0) {
        r.flag = matched > 0 ? CarFlag::Infinite : CarFlag::Undefined;
        r.car = matched > 0 ? std::numeric_limits<double>::infinity() : std::numeric_limits<double>::quiet_NaN();
        r.car_error = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    r.flag = CarFlag::Ok;
    r.car = m / u;
    // Poisson errors on both counts; with no matched counts fall back to one count.
    r.car_error = matched > 0 ? r.car * std::sqrt(1.0 / m + 1.0 / static_cast<double>(unmatched_total)) : 1.0 / u;
    return r;
}

CarResult car_from_tags(std::span<const TimeTag> signal, std::span<const TimeTag> idler, Picoseconds pulse_period_ps,
                        Picoseconds window_ps, Picoseconds expected_offset_ps, int n_unmatched_slots) {
    require(pulse_period_ps > 0, "pulse period must be > 0");
    require(window_ps > 0 && 2 * window_ps <= pulse_period_ps, "window must be in (0, period / 2]");
    require(n_unmatched_slots >= 1, "need at least one unmatched slot");
    check_sorted(signal, "signal");
    check_sorted(idler, "idler");

    // Slot k covers [offset + k T - w/2, offset + k T - w/2 + w).
    const Picoseconds half = window_ps / 2;
    const Picoseconds n = n_unmatched_slots;
    const Picoseconds lo = expected_offset_ps - n * pulse_period_ps - half;
    const Picoseconds hi = expected_offset_ps + n * pulse_period_ps - half + window_ps;

    std::vector<std::uint64_t> slot_counts(static_cast<std::size_t>(2 * n + 1), 0);
    sweep_pairs(signal, idler, lo, hi, [&](Picoseconds d) {
        const Picoseconds rel = d - lo;
        const Picoseconds slot = rel / pulse_period_ps;
        if (rel - slot * pulse_period_ps < window_ps) ++slot_counts[static_cast<std::size_t>(slot)];
    });

    std::uint64_t unmatched = 0;
    for (std::size_t k = 0; k < slot_counts.size(); ++k)
        if (static_cast<Picoseconds>(k) != n) unmatched += slot_counts[k];
    return finalize_car(slot_counts[static_cast<std::size_t>(n)], unmatched, 2 * n_unmatched_slots);
}

std::vector<std::vector<TimeTag>> demux_time_slots(std::span<const TimeTag> tags, Picoseconds slot_origin_ps,
                                                   Picoseconds slot_pitch_ps, int n_slots,
                                                   Picoseconds slot_window_ps, Picoseconds pulse_period_ps) {
    require(n_slots >= 1, "need at least one slot");
    require(slot_pitch_ps > 0 && pulse_period_ps > 0, "pitch and period must be > 0");
    require(static_cast<Picoseconds>(n_slots) * slot_pitch_ps <= pulse_period_ps,
            "time slots alias: n_slots * pitch exceeds the pulse period");
    require(slot_window_ps > 0 && slot_window_ps <= slot_pitch_ps, "slot window must be in (0, pitch]");

    std::vector<std::vector<TimeTag>> slots(static_cast<std::size_t>(n_slots));
    const Picoseconds half_pitch = slot_pitch_ps / 2;
    const Picoseconds half_window = slot_window_ps / 2;
    for (const TimeTag& tag : tags) {
        const Picoseconds phase = positive_mod(tag.time_ps - slot_origin_ps + half_pitch, pulse_period_ps);
        const Picoseconds slot = phase / slot_pitch_ps;
        if (slot >= n_slots) continue;
        // Offset from the slot centre, in [-pitch/2, pitch/2).
        const Picoseconds offset = phase - slot * slot_pitch_ps - half_pitch;
        if (offset < -half_window || offset >= slot_window_ps - half_window) continue;
        TimeTag shifted = tag;
        shifted.time_ps -= slot * slot_pitch_ps;
        slots[static_cast<std::size_t>(slot)].push_back(shifted);
    }
    return slots;
}

}  // namespace qnet
