#include "gcrs/crfc.hpp"

#include <algorithm>

namespace gcrs {

void Crfc::register_network(NodeId id, RegionId region) {
    known_networks_[id] = region;
}

std::optional<RegionId> Crfc::region_of_network(NodeId id) const {
    auto it = known_networks_.find(id);
    return it == known_networks_.end() ? std::nullopt : std::optional<RegionId>(it->second);
}

QueryOutcome Crfc::handle_query(const SpectrumQuery& q, UtcTime now) {
    uclt_.purge_expired(now);
    if (!is_registered(q.requester)) {
        return {QueryStatus::unknown_requester, std::nullopt};
    }
    const auto candidates =
        uclt_.lookup_idle_bands(q.requester, q.needed_width_hz, q.min_duration_ticks, now);
    for (const auto& candidate : candidates) {
        if (conflicts_with_active(candidate.lessor, candidate.band)) {
            continue;
        }
        const NetworkRecord* lessor = uclt_.find(candidate.lessor);
        const std::uint64_t expiry =
            std::min(now.ticks + q.duration_ticks, lessor->availability.until.ticks);
        Lease lease{next_lease_id_++, candidate.lessor, q.requester, candidate.band,
                    now,              UtcTime{expiry},  q.mode};
        active_.push_back(lease);
        return {QueryStatus::granted, lease};
    }
    return {QueryStatus::no_spectrum, std::nullopt};
}

std::vector<Revocation> Crfc::revoke_on_primary_return(NodeId lessor, FrequencyBand band,
                                                       UtcTime /*now*/) {
    std::vector<Revocation> revoked;
    auto overlaps_returned = [&](const Lease& l) {
        return l.lessor == lessor && bands_overlap(l.band, band);
    };
    for (const auto& lease : active_) {
        if (overlaps_returned(lease)) {
            revoked.push_back({lease, RevokeReason::primary_returned});
        }
    }
    active_.erase(std::remove_if(active_.begin(), active_.end(), overlaps_returned),
                  active_.end());
    return revoked;
}

std::vector<Revocation> Crfc::expire_leases(UtcTime now) {
    std::vector<Revocation> revoked;
    auto due = [&](const Lease& l) { return l.expires_at <= now; };
    for (const auto& lease : active_) {
        if (due(lease)) {
            revoked.push_back({lease, RevokeReason::expired});
        }
    }
    active_.erase(std::remove_if(active_.begin(), active_.end(), due), active_.end());
    return revoked;
}

bool Crfc::lease_table_valid() const {
    for (std::size_t i = 0; i < active_.size(); ++i) {
        if (active_[i].lessor == active_[i].lessee ||
            active_[i].granted_at >= active_[i].expires_at) {
            return false;
        }
        for (std::size_t j = i + 1; j < active_.size(); ++j) {
            if (active_[i].lessor == active_[j].lessor &&
                bands_overlap(active_[i].band, active_[j].band)) {
                return false;
            }
        }
    }
    return true;
}

bool Crfc::conflicts_with_active(NodeId lessor, FrequencyBand band) const {
    return std::any_of(active_.begin(), active_.end(), [&](const Lease& l) {
        return l.lessor == lessor && bands_overlap(l.band, band);
    });
}

} // namespace gcrs
