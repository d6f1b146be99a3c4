#pragma once

#include <compare>
#include <cstdint>

namespace gcrs {

/// A half-open frequency interval [low_hz, high_hz). The unit of leasing.
struct FrequencyBand {
    std::uint64_t low_hz{0};
    std::uint64_t high_hz{0};

    std::uint64_t width_hz() const { return high_hz - low_hz; }

    friend bool operator==(const FrequencyBand&, const FrequencyBand&) = default;
    friend auto operator<=>(const FrequencyBand&, const FrequencyBand&) = default;
};

inline bool band_is_valid(FrequencyBand b) { return b.low_hz < b.high_hz; }

/// True iff the half-open intervals intersect. Adjacency is not overlap.
inline bool bands_overlap(FrequencyBand a, FrequencyBand b) {
    const std::uint64_t lo = a.low_hz > b.low_hz ? a.low_hz : b.low_hz;
    const std::uint64_t hi = a.high_hz < b.high_hz ? a.high_hz : b.high_hz;
    return lo < hi;
}

} // namespace gcrs
