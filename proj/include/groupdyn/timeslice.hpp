#ifndef GROUPDYN_TIMESLICE_HPP
#define GROUPDYN_TIMESLICE_HPP

#include <cstdint>
#include <vector>

#include "core.hpp"
#include "corpus.hpp"

namespace groupdyn {

struct SlotConfig {
    int window_days = 7;
    int step_days = 6;
    std::int32_t range_start = 0;  // first day, inclusive
    std::int32_t range_end = 0;    // last day, inclusive

    void validate() const {
        if (window_days < 1 || step_days < 1) throw Error("slot window/step must be positive");
        if (step_days > window_days) throw Error("step_days must not exceed window_days");
        if (range_start > range_end) throw Error("empty slot range");
    }
};

struct TimeSlot {
    int index = 0;
    std::int32_t start_day = 0;
    std::int32_t end_day = 0;  // exclusive
    bool partial = false;

    std::int64_t start_sec() const { return static_cast<std::int64_t>(start_day) * kSecondsPerDay; }
    std::int64_t end_sec() const { return static_cast<std::int64_t>(end_day) * kSecondsPerDay; }
    bool contains(std::int64_t ts) const { return ts >= start_sec() && ts < end_sec(); }
};

// Slot i starts at range_start + i*step. Slot 0 always exists; further slots
// are emitted while their start precedes range_end. The last slot is clipped
// after the final day of the range and marked partial when shortened.
inline std::vector<TimeSlot> build_slots(const SlotConfig& cfg) {
    cfg.validate();
    std::vector<TimeSlot> slots;
    for (int i = 0;; ++i) {
        const std::int32_t start = cfg.range_start + static_cast<std::int32_t>(i) * cfg.step_days;
        if (i > 0 && start >= cfg.range_end) break;
        TimeSlot s;
        s.index = i;
        s.start_day = start;
        s.end_day = std::min<std::int32_t>(start + cfg.window_days, cfg.range_end + 1);
        s.partial = (s.end_day - s.start_day) < cfg.window_days;
        slots.push_back(s);
    }
    return slots;
}

// Indices of the slots whose window contains `ts`; at most ceil(window/step).
inline std::vector<int> covering_slots(const SlotConfig& cfg, std::int64_t ts,
                                       int slot_count) {
    std::vector<int> out;
    const std::int64_t day = ts / kSecondsPerDay - cfg.range_start;
    if (day < 0) return out;
    int lo = static_cast<int>((day - cfg.window_days) / cfg.step_days);
    for (int i = std::max(0, lo); i < slot_count; ++i) {
        const std::int64_t start = static_cast<std::int64_t>(i) * cfg.step_days;
        if (start > day) break;
        if (day < start + cfg.window_days) out.push_back(i);
    }
    return out;
}

// Interactions falling in [slot.start, slot.end).
inline std::vector<Interaction> assign(const TimeSlot& slot,
                                       const std::vector<Interaction>& interactions) {
    std::vector<Interaction> out;
    for (const auto& ia : interactions)
        if (slot.contains(ia.timestamp)) out.push_back(ia);
    return out;
}

// All slots at once; result[i] holds slot i's interactions in input order.
inline std::vector<std::vector<Interaction>> assign_all(
    const SlotConfig& cfg, const std::vector<TimeSlot>& slots,
    const std::vector<Interaction>& interactions) {
    std::vector<std::vector<Interaction>> out(slots.size());
    for (const auto& ia : interactions)
        for (int i : covering_slots(cfg, ia.timestamp, static_cast<int>(slots.size())))
            if (slots[i].contains(ia.timestamp)) out[i].push_back(ia);
    return out;
}

}  // namespace groupdyn

#endif
