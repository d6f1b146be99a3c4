#include "gcrs/time.hpp"

namespace gcrs {

int utc_minutes_of_day(UtcTime t, std::uint32_t tick_seconds) {
    const std::uint64_t total_minutes = t.ticks * tick_seconds / 60;
    return static_cast<int>(total_minutes % kMinutesPerDay);
}

int convert_time(int utc_minutes_of_day, std::int32_t offset_minutes) {
    const int shifted = (utc_minutes_of_day + offset_minutes) % kMinutesPerDay;
    return shifted < 0 ? shifted + kMinutesPerDay : shifted;
}

int local_minutes_of_day(UtcTime t, std::uint32_t tick_seconds, std::int32_t offset_minutes) {
    return convert_time(utc_minutes_of_day(t, tick_seconds), offset_minutes);
}

bool is_downtime(const DowntimeWindow& w, const Region& region, UtcTime t,
                 std::uint32_t tick_seconds) {
    const int local = local_minutes_of_day(t, tick_seconds, region.utc_offset_minutes);
    if (w.repeats_daily) {
        // Distance from window start, wrapping midnight.
        const int delta = (local - static_cast<int>(w.start_local_minutes) + kMinutesPerDay)
                          % kMinutesPerDay;
        return delta < static_cast<int>(w.duration_minutes);
    }
    // One-shot window: absolute local minutes since epoch, local day 0 only.
    const std::int64_t abs_local =
        static_cast<std::int64_t>(t.ticks * tick_seconds / 60) + region.utc_offset_minutes;
    const std::int64_t start = static_cast<std::int64_t>(w.start_local_minutes);
    return abs_local >= start && abs_local < start + static_cast<std::int64_t>(w.duration_minutes);
}

} // namespace gcrs
