#include "gcrs/uclt.hpp"

#include <algorithm>

namespace gcrs {

std::optional<std::string> validate_record(const NetworkRecord& record) {
    for (const auto& b : record.occupied_bands) {
        if (!band_is_valid(b)) {
            return "occupied band has low_hz >= high_hz";
        }
    }
    for (const auto& b : record.idle_bands) {
        if (!band_is_valid(b)) {
            return "idle band has low_hz >= high_hz";
        }
    }
    for (const auto& occ : record.occupied_bands) {
        for (const auto& idle : record.idle_bands) {
            if (bands_overlap(occ, idle)) {
                return "occupied and idle bands overlap";
            }
        }
    }
    if (record.availability.from >= record.availability.until) {
        return "availability window is empty (from >= until)";
    }
    return std::nullopt;
}

bool Uclt::upsert(NetworkRecord record, std::string* error) {
    if (auto why = validate_record(record)) {
        if (error != nullptr) {
            *error = *why;
        }
        return false;
    }
    std::sort(record.occupied_bands.begin(), record.occupied_bands.end());
    std::sort(record.idle_bands.begin(), record.idle_bands.end());
    records_[record.network_id] = std::move(record);
    return true;
}

std::vector<IdleCandidate> Uclt::lookup_idle_bands(NodeId requester,
                                                   std::uint64_t needed_width_hz,
                                                   std::uint64_t min_duration_ticks,
                                                   UtcTime now) const {
    std::vector<IdleCandidate> out;
    for (const auto& [id, record] : records_) {
        if (id == requester) {
            continue;
        }
        if (!record.permissions.admits(requester)) {
            continue;
        }
        const std::uint64_t until = record.availability.until.ticks;
        if (until <= now.ticks || until - now.ticks < min_duration_ticks) {
            continue;
        }
        for (const auto& band : record.idle_bands) {
            if (band.width_hz() >= needed_width_hz) {
                out.push_back({id, band});
            }
        }
    }
    // records_ iterates by lessor id; idle bands are kept sorted by low_hz.
    return out;
}

void Uclt::purge_expired(UtcTime now) {
    for (auto it = records_.begin(); it != records_.end();) {
        if (it->second.availability.until <= now) {
            it = records_.erase(it);
        } else {
            ++it;
        }
    }
}

const NetworkRecord* Uclt::find(NodeId network_id) const {
    auto it = records_.find(network_id);
    return it == records_.end() ? nullptr : &it->second;
}

} // namespace gcrs
