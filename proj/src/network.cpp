#include "gcrs/network.hpp"

#include <algorithm>

namespace gcrs {

RegionalNetwork::RegionalNetwork(NetworkConfig config, std::uint64_t seed,
                                 std::uint32_t tick_seconds)
    : config_(std::move(config)), tick_seconds_(tick_seconds), rng_(seed) {
    own_.reserve(config_.bands.size());
    for (const auto& bc : config_.bands) {
        OwnBand b;
        b.cfg = bc;
        b.primary = bc.model.kind == PrimaryUserModel::Kind::markov
                        ? bc.model.markov.initially_occupied
                        : true; // diurnal bands resolve on the first advance
        own_.push_back(b);
    }
}

bool RegionalNetwork::model_presence(const OwnBand& b, UtcTime now) {
    switch (b.cfg.model.kind) {
    case PrimaryUserModel::Kind::diurnal:
        return !is_downtime(b.cfg.model.downtime, config_.region, now, tick_seconds_);
    case PrimaryUserModel::Kind::markov: {
        // Exactly one draw per markov band per tick, whatever the state.
        const double u = rng_.next_unit();
        if (b.primary) {
            return !(u < b.cfg.model.markov.p_on_to_off);
        }
        return u < b.cfg.model.markov.p_off_to_on;
    }
    }
    return true;
}

std::vector<TransitionNotice> RegionalNetwork::advance_occupancy(UtcTime now) {
    std::vector<TransitionNotice> notices;
    for (auto& b : own_) {
        if (b.leased_out && now >= b.lease_expires) {
            b.leased_out = false; // local release at the agreed expiry
        }
        if (!b.has_reported) {
            // First advance publishes the starting state; the chain only
            // starts drawing on the following tick.
            if (b.cfg.model.kind == PrimaryUserModel::Kind::diurnal) {
                b.primary = model_presence(b, now);
            }
            b.has_reported = true;
            notices.push_back({b.cfg.band, b.primary});
            continue;
        }
        const bool present = model_presence(b, now);
        if (present != b.primary) {
            if (present && b.leased_out) {
                b.leased_out = false;
            }
            b.primary = present;
            notices.push_back({b.cfg.band, present});
        }
    }
    return notices;
}

void RegionalNetwork::record_sensing(UtcTime /*now*/) {
    for (auto& b : own_) {
        b.last_reading_primary = b.primary;
        b.has_reading = true;
    }
}

SenseResult RegionalNetwork::sense_band(FrequencyBand band) const {
    const OwnBand* b = find_own(band);
    if (b == nullptr) {
        return SenseResult::primary_present;
    }
    const bool present = b->has_reading ? b->last_reading_primary : b->primary;
    return present ? SenseResult::primary_present : SenseResult::hole_detected;
}

std::vector<TransitionNotice> RegionalNetwork::handle_primary_return(FrequencyBand band,
                                                                     UtcTime /*now*/) {
    OwnBand* b = find_own(band);
    if (b == nullptr || b->primary) {
        return {};
    }
    b->primary = true;
    b->has_reported = true;
    b->leased_out = false;
    return {{band, true}};
}

Occupancy RegionalNetwork::occupancy(FrequencyBand band) const {
    for (const auto& g : leased_in_) {
        if (g.band == band) {
            return Occupancy::leased_in;
        }
    }
    const OwnBand* b = find_own(band);
    if (b == nullptr) {
        return Occupancy::idle;
    }
    if (b->primary) {
        return Occupancy::occupied_by_primary;
    }
    return b->leased_out ? Occupancy::leased_out : Occupancy::idle;
}

bool RegionalNetwork::primary_present(FrequencyBand band) const {
    const OwnBand* b = find_own(band);
    return b != nullptr && b->primary;
}

void RegionalNetwork::mark_leased_out(FrequencyBand band, UtcTime expires_at) {
    if (OwnBand* b = find_own(band)) {
        b->leased_out = true;
        b->lease_expires = expires_at;
    }
}

void RegionalNetwork::clear_leased_out(FrequencyBand band) {
    if (OwnBand* b = find_own(band)) {
        b->leased_out = false;
    }
}

std::optional<UtcTime> RegionalNetwork::leased_out_expiry(FrequencyBand band) const {
    const OwnBand* b = find_own(band);
    if (b == nullptr || !b->leased_out) {
        return std::nullopt;
    }
    return b->lease_expires;
}

void RegionalNetwork::add_leased_in(const LeasedInBand& grant) {
    leased_in_.push_back(grant);
}

bool RegionalNetwork::remove_leased_in(LeaseId lease_id) {
    const auto before = leased_in_.size();
    leased_in_.erase(std::remove_if(leased_in_.begin(), leased_in_.end(),
                                    [&](const LeasedInBand& g) { return g.lease_id == lease_id; }),
                     leased_in_.end());
    return leased_in_.size() != before;
}

bool RegionalNetwork::busy_at_last_sensing() const {
    for (const auto& b : own_) {
        const bool present = b.has_reading ? b.last_reading_primary : b.primary;
        if (!present && !b.leased_out) {
            return false; // an own hole is available
        }
    }
    return true;
}

std::vector<FrequencyBand> RegionalNetwork::idle_bands_for_probe(
    std::uint64_t needed_width_hz, std::uint64_t min_duration_ticks, UtcTime now) const {
    std::vector<FrequencyBand> out;
    const std::uint64_t until = config_.availability.until.ticks;
    if (until <= now.ticks || until - now.ticks < min_duration_ticks) {
        return out;
    }
    for (const auto& b : own_) {
        if (!b.primary && !b.leased_out && b.cfg.band.width_hz() >= needed_width_hz) {
            out.push_back(b.cfg.band);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

NetworkRecord RegionalNetwork::current_record() const {
    NetworkRecord r;
    r.network_id = config_.network_id;
    r.region_id = config_.region.region_id;
    for (const auto& b : own_) {
        if (b.primary) {
            r.occupied_bands.push_back(b.cfg.band);
        } else if (!b.leased_out) {
            r.idle_bands.push_back(b.cfg.band);
        }
    }
    std::sort(r.occupied_bands.begin(), r.occupied_bands.end());
    std::sort(r.idle_bands.begin(), r.idle_bands.end());
    r.permissions = config_.permissions;
    r.availability = config_.availability;
    return r;
}

RegionalNetwork::OwnBand* RegionalNetwork::find_own(FrequencyBand band) {
    for (auto& b : own_) {
        if (b.cfg.band == band) {
            return &b;
        }
    }
    return nullptr;
}

const RegionalNetwork::OwnBand* RegionalNetwork::find_own(FrequencyBand band) const {
    for (const auto& b : own_) {
        if (b.cfg.band == band) {
            return &b;
        }
    }
    return nullptr;
}

} // namespace gcrs
