#include "gcrs/constellation.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace gcrs {

void ResponsibilityMap::assign(RegionId region, NodeId entity) {
    assignment_[region] = entity;
}

std::optional<NodeId> ResponsibilityMap::responsible_for(RegionId region) const {
    auto it = assignment_.find(region);
    return it == assignment_.end() ? std::nullopt : std::optional<NodeId>(it->second);
}

std::optional<RegionId> ResponsibilityMap::region_of(NodeId entity) const {
    for (const auto& [region, e] : assignment_) {
        if (e == entity) {
            return region;
        }
    }
    return std::nullopt;
}

bool ResponsibilityMap::total_and_injective(const std::vector<RegionId>& regions) const {
    std::set<NodeId> seen;
    for (RegionId r : regions) {
        auto it = assignment_.find(r);
        if (it == assignment_.end()) {
            return false;
        }
        if (!seen.insert(it->second).second) {
            return false;
        }
    }
    return true;
}

Constellation::Constellation(std::vector<Satellite> sats) {
    if (sats.empty()) {
        throw std::invalid_argument("constellation needs at least one satellite");
    }
    by_position_.resize(sats.size());
    std::vector<bool> position_taken(sats.size(), false);
    std::set<NodeId> ids;
    std::set<RegionId> region_ids;
    for (const auto& s : sats) {
        if (s.ring_position >= sats.size() || position_taken[s.ring_position]) {
            throw std::invalid_argument("ring positions must be a permutation 0..N-1");
        }
        if (!ids.insert(s.sat_id).second) {
            throw std::invalid_argument("duplicate satellite id");
        }
        if (!region_ids.insert(s.responsible_region).second) {
            throw std::invalid_argument("two satellites share a responsible region");
        }
        position_taken[s.ring_position] = true;
        by_position_[s.ring_position] = s;
    }
    for (const auto& s : by_position_) {
        duties_.assign(s.responsible_region, s.sat_id);
        baseline_[s.responsible_region] = s.sat_id;
    }
}

std::vector<RegionId> Constellation::regions() const {
    std::vector<RegionId> out;
    out.reserve(by_position_.size());
    for (const auto& [region, sat] : baseline_) {
        out.push_back(region);
    }
    return out;
}

std::optional<NodeId> Constellation::responsible_for(RegionId region) const {
    return duties_.responsible_for(region);
}

std::optional<NodeId> Constellation::home_satellite(RegionId region) const {
    auto it = baseline_.find(region);
    return it == baseline_.end() ? std::nullopt : std::optional<NodeId>(it->second);
}

bool Constellation::is_free(NodeId sat_id) const {
    return find_sat(sat_id) != nullptr && !duties_.region_of(sat_id).has_value();
}

std::optional<RegionId> Constellation::attached_region(NodeId sat_id) const {
    auto it = attached_.find(sat_id);
    return it == attached_.end() ? std::nullopt : std::optional<RegionId>(it->second);
}

HandOverChain Constellation::compute_handover_chain(NodeId busy_sat, NodeId idle_sat) const {
    const Satellite* busy = find_sat(busy_sat);
    const Satellite* idle = find_sat(idle_sat);
    if (busy == nullptr || idle == nullptr) {
        throw std::invalid_argument("satellite not in the ring");
    }
    if (busy_sat == idle_sat) {
        throw std::invalid_argument("busy and idle satellite coincide; nothing to free");
    }
    const int n = static_cast<int>(by_position_.size());
    const int from = static_cast<int>(idle->ring_position);
    const int to = static_cast<int>(busy->ring_position);
    const int ascending = (to - from + n) % n;
    const int descending = (from - to + n) % n;
    const int step = ascending < descending ? 1 : -1; // tie walks descending
    const int hops = std::min(ascending, descending);

    HandOverChain chain;
    chain.sats.reserve(static_cast<std::size_t>(hops) + 1);
    int pos = from;
    for (int i = 0; i <= hops; ++i) {
        chain.sats.push_back(by_position_[static_cast<std::size_t>(pos)].sat_id);
        pos = (pos + step + n) % n;
    }
    return chain;
}

std::vector<HandOverDirectivePayload> Constellation::validate_and_plan(
    const HandOverChain& chain, NodeId idle_ground_network, UtcTime now) const {
    if (chain.sats.size() < 2) {
        throw std::invalid_argument("hand-over chain needs at least two satellites");
    }
    std::set<NodeId> seen;
    const int n = static_cast<int>(by_position_.size());
    for (std::size_t i = 0; i < chain.sats.size(); ++i) {
        const Satellite* s = find_sat(chain.sats[i]);
        if (s == nullptr) {
            throw std::invalid_argument("chain names a satellite outside the ring");
        }
        if (!seen.insert(s->sat_id).second) {
            throw std::invalid_argument("chain repeats a satellite");
        }
        if (!duties_.region_of(s->sat_id).has_value()) {
            throw std::invalid_argument("chain crosses a duty-free satellite");
        }
        if (i > 0) {
            const Satellite* prev = find_sat(chain.sats[i - 1]);
            const int d = std::abs(static_cast<int>(s->ring_position) -
                                   static_cast<int>(prev->ring_position));
            if (d != 1 && d != n - 1) {
                throw std::invalid_argument("chain entries are not ring-adjacent");
            }
        }
    }
    std::vector<HandOverDirectivePayload> directives;
    directives.reserve(chain.sats.size());
    for (std::size_t i = 0; i < chain.sats.size(); ++i) {
        const RegionId region = *duties_.region_of(chain.sats[i]);
        const NodeId to = i == 0 ? idle_ground_network : chain.sats[i - 1];
        directives.push_back({chain.sats[i], to, region, now.ticks});
    }
    return directives;
}

std::vector<HandOverDirectivePayload> Constellation::plan_cascade(const HandOverChain& chain,
                                                                  NodeId idle_ground_network,
                                                                  UtcTime now) const {
    return validate_and_plan(chain, idle_ground_network, now);
}

std::vector<HandOverDirectivePayload> Constellation::execute_cascade(const HandOverChain& chain,
                                                                     NodeId idle_ground_network,
                                                                     UtcTime now) {
    auto directives = validate_and_plan(chain, idle_ground_network, now);
    for (const auto& d : directives) {
        apply_directive(d);
    }
    return directives;
}

void Constellation::apply_directive(const HandOverDirectivePayload& directive) {
    duties_.assign(directive.region, directive.to_entity);
    attached_.erase(directive.to_entity); // a re-tasked satellite is no longer spare
    if (find_sat(directive.from_entity) != nullptr &&
        !duties_.region_of(directive.from_entity).has_value()) {
        attached_[directive.from_entity] = directive.region;
    }
}

std::vector<HandOverDirectivePayload> Constellation::compute_reversal_directives(
    UtcTime now) const {
    // Unwind so every single application keeps the map injective: only
    // reassign a region once its baseline satellite holds nothing.
    std::map<RegionId, NodeId> current = duties_.assignment();
    std::set<RegionId> pending;
    for (const auto& [region, home] : baseline_) {
        if (current[region] != home) {
            pending.insert(region);
        }
    }
    auto holds_anything = [&current](NodeId entity) {
        for (const auto& [r, e] : current) {
            if (e == entity) {
                return true;
            }
        }
        return false;
    };
    std::vector<HandOverDirectivePayload> directives;
    while (!pending.empty()) {
        bool progressed = false;
        for (RegionId region : pending) {
            const NodeId home = baseline_.at(region);
            if (holds_anything(home)) {
                continue;
            }
            directives.push_back({current[region], home, region, now.ticks});
            current[region] = home;
            pending.erase(region);
            progressed = true;
            break;
        }
        if (!progressed) {
            // Valid cascades always leave an unwindable path (every
            // cascade frees its tail satellite).
            throw std::logic_error("reversal deadlock: no duty-free baseline satellite");
        }
    }
    return directives;
}

const Satellite* Constellation::find_sat(NodeId sat_id) const {
    for (const auto& s : by_position_) {
        if (s.sat_id == sat_id) {
            return &s;
        }
    }
    return nullptr;
}

QuerySequenceResult run_query_sequence(const Constellation& constellation, NodeId crfc_id,
                                       NodeId busy_network, RegionId busy_region,
                                       const SpectrumQuery& query,
                                       const std::vector<RegionStatus>& statuses, UtcTime now) {
    QuerySequenceResult result;
    std::map<std::pair<NodeId, NodeId>, std::uint32_t> seqs;
    auto send = [&](NodeId src, NodeId dst, Payload payload) -> WireMessage& {
        WireMessage m;
        m.src = src;
        m.dst = dst;
        m.seq = seqs[{src, dst}]++;
        m.sent_at = now;
        m.payload = std::move(payload);
        result.trace.push_back(std::move(m));
        return result.trace.back();
    };
    auto status_of = [&](RegionId region) -> const RegionStatus* {
        for (const auto& s : statuses) {
            if (s.region == region) {
                return &s;
            }
        }
        return nullptr;
    };

    // Step 1: the busy network asks its satellite.
    const auto busy_sat = constellation.responsible_for(busy_region);
    if (!busy_sat.has_value()) {
        result.failed_at_step = 1;
        return result;
    }
    send(busy_network, *busy_sat, query);

    // Step 2: the satellite forwards to the coordinator.
    const WireMessage& forwarded = send(*busy_sat, crfc_id, query);
    const std::uint32_t ref = forwarded.seq;

    // Steps 3-6 fan out over every satellite currently holding a duty,
    // ascending satellite id.
    std::vector<const Satellite*> probed;
    for (const auto& s : constellation.satellites()) {
        if (constellation.responsibility().region_of(s.sat_id).has_value()) {
            probed.push_back(&s);
        }
    }
    std::sort(probed.begin(), probed.end(),
              [](const Satellite* a, const Satellite* b) { return a->sat_id < b->sat_id; });

    const ProbeRequestPayload probe{ref, query.needed_width_hz, query.min_duration_ticks};
    for (const Satellite* s : probed) {
        send(crfc_id, s->sat_id, probe);
    }
    for (const Satellite* s : probed) {
        const RegionId region = *constellation.responsibility().region_of(s->sat_id);
        const RegionStatus* st = status_of(region);
        send(s->sat_id, st != nullptr ? st->network : 0, probe);
    }
    for (const Satellite* s : probed) {
        const RegionId region = *constellation.responsibility().region_of(s->sat_id);
        const RegionStatus* st = status_of(region);
        StatusReportPayload report{ref, region, st != nullptr && st->idle,
                                   st != nullptr ? st->idle_bands : std::vector<FrequencyBand>{}};
        send(st != nullptr ? st->network : 0, s->sat_id, report);
    }
    for (const Satellite* s : probed) {
        const RegionId region = *constellation.responsibility().region_of(s->sat_id);
        const RegionStatus* st = status_of(region);
        StatusReportPayload report{ref, region, st != nullptr && st->idle,
                                   st != nullptr ? st->idle_bands : std::vector<FrequencyBand>{}};
        send(s->sat_id, crfc_id, report);
    }

    // Choose the lowest idle region id, the asking region excluded.
    for (const Satellite* s : probed) {
        const RegionId region = *constellation.responsibility().region_of(s->sat_id);
        const RegionStatus* st = status_of(region);
        if (region == busy_region || st == nullptr || !st->idle) {
            continue;
        }
        if (!result.chosen_region.has_value() || region < *result.chosen_region) {
            result.chosen_region = region;
        }
    }

    // Steps 7-8: the answer travels back down.
    SpectrumResponsePayload response;
    response.query_ref = ref;
    if (result.chosen_region.has_value()) {
        response.status = QueryStatus::region_available;
        response.region = *result.chosen_region;
        if (const RegionStatus* st = status_of(*result.chosen_region)) {
            response.region_idle_bands = st->idle_bands;
        }
    } else {
        response.status = QueryStatus::no_spectrum;
    }
    send(crfc_id, *busy_sat, response);
    send(*busy_sat, busy_network, response);
    return result;
}

} // namespace gcrs
