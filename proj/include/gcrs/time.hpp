#pragma once

#include <compare>
#include <cstdint>

namespace gcrs {

inline constexpr std::uint32_t kDefaultTickSeconds = 60;
inline constexpr std::int32_t kMinUtcOffsetMinutes = -720;
inline constexpr std::int32_t kMaxUtcOffsetMinutes = 840;
inline constexpr std::int32_t kMinutesPerDay = 1440;

/// Simulation timestamp: ticks since epoch. The real-seconds-per-tick
/// resolution is scenario configuration, not part of the timestamp.
struct UtcTime {
    std::uint64_t ticks{0};

    friend bool operator==(const UtcTime&, const UtcTime&) = default;
    friend auto operator<=>(const UtcTime&, const UtcTime&) = default;
};

struct Region {
    std::uint32_t region_id{0};
    std::int32_t utc_offset_minutes{0}; // kMinUtcOffsetMinutes..kMaxUtcOffsetMinutes
};

/// A daily licensed-transmission stop window, in local minutes past midnight.
/// May wrap midnight (start + duration > 1440).
struct DowntimeWindow {
    std::uint32_t start_local_minutes{0}; // [0, 1440)
    std::uint32_t duration_minutes{0};    // (0, 1440]
    bool repeats_daily{true};

    friend bool operator==(const DowntimeWindow&, const DowntimeWindow&) = default;
};

/// Minutes past UTC midnight for tick t.
int utc_minutes_of_day(UtcTime t, std::uint32_t tick_seconds);

/// Shifts a minutes-of-day value by a UTC offset, mod 1440. Total function.
int convert_time(int utc_minutes_of_day, std::int32_t offset_minutes);

/// Minutes past local midnight at the given offset.
int local_minutes_of_day(UtcTime t, std::uint32_t tick_seconds, std::int32_t offset_minutes);

/// True iff local time at `region` falls inside the window at tick t.
bool is_downtime(const DowntimeWindow& w, const Region& region, UtcTime t,
                 std::uint32_t tick_seconds);

} // namespace gcrs
