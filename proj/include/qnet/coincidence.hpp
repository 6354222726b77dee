#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qnet/detection.hpp"

namespace qnet {

struct CoincidenceHistogram {
    Picoseconds bin_width_ps = 0;
    std::vector<Picoseconds> offsets;  // bin centres, idler - signal
    std::vector<std::uint64_t> counts;

    std::uint64_t total() const;
};

// All (signal, idler) tag pairs whose delay idler - signal falls in a bin.
// Bins are centred on k * bin_width for |k| <= ceil(max_offset / bin_width),
// each covering [centre - w/2, centre + w/2).
CoincidenceHistogram histogram(std::span<const TimeTag> signal, std::span<const TimeTag> idler,
                               Picoseconds bin_width_ps, Picoseconds max_offset_ps);

enum class CarFlag { Ok, Infinite, Undefined };

struct CarResult {
    std::uint64_t matched = 0;          // R_m as counts in the matched slot
    std::uint64_t unmatched_total = 0;  // summed over all unmatched slots
    int unmatched_slots = 0;            // number of slots in unmatched_total (2 n)
    double car = 0.0;
    double car_error = 0.0;
    CarFlag flag = CarFlag::Undefined;

    // Per-slot average accidental count.
    double unmatched_mean() const {
        return unmatched_slots > 0 ? static_cast<double>(unmatched_total) / unmatched_slots : 0.0;
    }
};

// Recompute car / car_error / flag from the counts. Used when results of
// several channels are summed.
CarResult finalize_car(std::uint64_t matched, std::uint64_t unmatched_total, int unmatched_slots);

// R_m: pairs with delay in expected_offset +- window/2. R_um: mean over the
// slots shifted by +-k * period, k = 1..n_unmatched_slots.
CarResult car_from_tags(std::span<const TimeTag> signal, std::span<const TimeTag> idler, Picoseconds pulse_period_ps,
                        Picoseconds window_ps, Picoseconds expected_offset_ps, int n_unmatched_slots);

// Sort each tag into the time slot it falls in within the pulse period. Slot k
// is centred on origin + k * pitch; a tag is kept when it lies within
// slot_window / 2 of its slot centre, and its time is shifted back by k * pitch.
// Requires n_slots * pitch <= period.
std::vector<std::vector<TimeTag>> demux_time_slots(std::span<const TimeTag> tags, Picoseconds slot_origin_ps,
                                                   Picoseconds slot_pitch_ps, int n_slots,
                                                   Picoseconds slot_window_ps, Picoseconds pulse_period_ps);

}  // namespace qnet
