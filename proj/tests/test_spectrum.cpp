#include <doctest.h>

#include <set>

#include "gcrs/band.hpp"
#include "gcrs/rng.hpp"
#include "gcrs/time.hpp"

using namespace gcrs;

namespace {

// Independent oracle: build the window's minute set by walking forward
// from the start, then test membership of the local minute.
bool downtime_oracle(const DowntimeWindow& w, int local_minute) {
    std::set<int> members;
    for (std::uint32_t k = 0; k < w.duration_minutes; ++k) {
        members.insert(static_cast<int>((w.start_local_minutes + k) % 1440));
    }
    return members.count(local_minute) > 0;
}

} // namespace

TEST_CASE("convert_time offset arithmetic") {
    // UTC 06:30 = 390 minutes.
    CHECK(convert_time(390, 330) == 720);  // Hyderabad noon
    CHECK(convert_time(390, -300) == 90);  // New York 01:30
    CHECK(convert_time(390, 0) == 390);

    // Tick-based form, default 60 s/tick: tick 390 is 06:30.
    CHECK(local_minutes_of_day(UtcTime{390}, 60, 330) == 720);
    CHECK(local_minutes_of_day(UtcTime{390}, 60, -300) == 90);
}

TEST_CASE("convert_time wraps at day boundaries") {
    CHECK(convert_time(1400, 100) == 60);
    CHECK(convert_time(30, -90) == 1380);
    CHECK(convert_time(0, -720) == 720);
    CHECK(convert_time(1439, 840) == (1439 + 840) % 1440);
}

TEST_CASE("convert_time round trip recovers the original") {
    for (int t = 0; t < 1440; t += 7) {
        for (int m = kMinUtcOffsetMinutes; m <= kMaxUtcOffsetMinutes; m += 97) {
            CHECK(convert_time(convert_time(t, m), -m) == t);
        }
    }
}

TEST_CASE("minutes of day from ticks") {
    CHECK(utc_minutes_of_day(UtcTime{0}, 60) == 0);
    CHECK(utc_minutes_of_day(UtcTime{1440}, 60) == 0); // next day
    CHECK(utc_minutes_of_day(UtcTime{90}, 120) == 180);
    CHECK(utc_minutes_of_day(UtcTime{59}, 1) == 0); // sub-minute ticks floor
    CHECK(utc_minutes_of_day(UtcTime{60}, 1) == 1);
}

TEST_CASE("bands_overlap on half-open intervals") {
    CHECK(bands_overlap({100, 200}, {150, 250}));
    CHECK_FALSE(bands_overlap({100, 200}, {200, 300})); // adjacency
    CHECK(bands_overlap({100, 200}, {100, 200}));
    CHECK_FALSE(bands_overlap({100, 200}, {300, 400}));
    CHECK(bands_overlap({100, 400}, {200, 300})); // containment
}

TEST_CASE("bands_overlap is symmetric and reflexive") {
    DeterministicRng rng(0xB4D5);
    for (int i = 0; i < 500; ++i) {
        const std::uint64_t a_low = rng.next_u64() % 1000;
        const std::uint64_t b_low = rng.next_u64() % 1000;
        const FrequencyBand a{a_low, a_low + 1 + rng.next_u64() % 200};
        const FrequencyBand b{b_low, b_low + 1 + rng.next_u64() % 200};
        CHECK(bands_overlap(a, b) == bands_overlap(b, a));
        CHECK(bands_overlap(a, a));
    }
}

TEST_CASE("is_downtime examples") {
    const Region utc0{1, 0};
    const Region utc12{2, 720};

    DowntimeWindow first_half{0, 720, true};
    CHECK(is_downtime(first_half, utc0, UtcTime{360}, 60));        // 06:00
    CHECK_FALSE(is_downtime(first_half, utc12, UtcTime{360}, 60)); // local 18:00

    DowntimeWindow night{22 * 60, 240, true}; // 22:00 + 4h, wraps midnight
    CHECK(is_downtime(night, utc0, UtcTime{60}, 60)); // 01:00
    CHECK_FALSE(is_downtime(night, utc0, UtcTime{600}, 60));
}

TEST_CASE("is_downtime matches the minute-by-minute oracle") {
    DeterministicRng rng(0x71AE);
    for (int trial = 0; trial < 40; ++trial) {
        DowntimeWindow w;
        w.start_local_minutes = static_cast<std::uint32_t>(rng.next_u64() % 1440);
        w.duration_minutes = 1 + static_cast<std::uint32_t>(rng.next_u64() % 1440);
        const std::int32_t offset =
            static_cast<std::int32_t>(rng.next_u64() % (840 + 720 + 1)) - 720;
        const Region region{9, offset};
        for (int utc_minute = 0; utc_minute < 1440; utc_minute += 11) {
            const int local = convert_time(utc_minute, offset);
            CHECK(is_downtime(w, region, UtcTime{static_cast<std::uint64_t>(utc_minute)}, 60) ==
                  downtime_oracle(w, local));
        }
    }
}

TEST_CASE("antipodal windows of at most 12h are never both in downtime") {
    DeterministicRng rng(0xA171);
    for (int trial = 0; trial < 30; ++trial) {
        DowntimeWindow w;
        w.start_local_minutes = static_cast<std::uint32_t>(rng.next_u64() % 1440);
        w.duration_minutes = 1 + static_cast<std::uint32_t>(rng.next_u64() % 720);
        const std::int32_t base =
            static_cast<std::int32_t>(rng.next_u64() % 121) - 120; // keep both offsets in range
        const Region a{1, base};
        const Region b{2, base + 720};
        for (std::uint64_t tick = 0; tick < 1440; tick += 7) {
            CHECK_FALSE(is_downtime(w, a, UtcTime{tick}, 60) &&
                        is_downtime(w, b, UtcTime{tick}, 60));
        }
    }
}

TEST_CASE("non-repeating window covers local day zero only") {
    const Region utc0{1, 0};
    DowntimeWindow once{60, 120, false};
    CHECK(is_downtime(once, utc0, UtcTime{90}, 60));
    CHECK_FALSE(is_downtime(once, utc0, UtcTime{90 + 1440}, 60)); // next day
    CHECK_FALSE(is_downtime(once, utc0, UtcTime{30}, 60));
}
