#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gcrs/band.hpp"
#include "gcrs/time.hpp"

namespace gcrs {

/// Every addressable entity (regional network, coordinator, satellite)
/// shares one id space; these are the u32 src/dst values on the wire.
using NodeId = std::uint32_t;
using RegionId = std::uint32_t;

enum class PermissionMode : std::uint8_t {
    open_to_all = 0,
    allow_list = 1,
};

struct PermissionSet {
    PermissionMode mode{PermissionMode::open_to_all};
    std::set<NodeId> allowed; // consulted when mode == allow_list

    bool admits(NodeId requester) const {
        return mode == PermissionMode::open_to_all || allowed.count(requester) > 0;
    }

    friend bool operator==(const PermissionSet&, const PermissionSet&) = default;
};

struct AvailabilityWindow {
    UtcTime from{};
    UtcTime until{}; // from < until

    friend bool operator==(const AvailabilityWindow&, const AvailabilityWindow&) = default;
};

/// One registry row: a network's occupied/idle bands, who may lease from
/// it, and for how long it remains reachable.
struct NetworkRecord {
    NodeId network_id{0};
    RegionId region_id{0};
    std::vector<FrequencyBand> occupied_bands;
    std::vector<FrequencyBand> idle_bands;
    PermissionSet permissions;
    AvailabilityWindow availability;

    friend bool operator==(const NetworkRecord&, const NetworkRecord&) = default;
};

/// nullopt when well-formed, otherwise a description of the violation.
std::optional<std::string> validate_record(const NetworkRecord& record);

struct IdleCandidate {
    NodeId lessor{0};
    FrequencyBand band;

    friend bool operator==(const IdleCandidate&, const IdleCandidate&) = default;
};

/// Universal Communication Lookup Table: the coordinator-owned registry of
/// all networks. Records are replaced whole on upsert, never patched.
class Uclt {
  public:
    /// Inserts or replaces the record for record.network_id. Returns false
    /// (and leaves the table untouched) for a malformed record.
    bool upsert(NetworkRecord record, std::string* error = nullptr);

    /// Idle bands of width >= needed_width_hz whose owner admits the
    /// requester and stays available for at least min_duration_ticks.
    /// A network is never offered its own bands. Deterministic order:
    /// lessor id ascending, then band low_hz ascending.
    std::vector<IdleCandidate> lookup_idle_bands(NodeId requester,
                                                 std::uint64_t needed_width_hz,
                                                 std::uint64_t min_duration_ticks,
                                                 UtcTime now) const;

    /// Drops every record with availability.until <= now.
    void purge_expired(UtcTime now);

    const NetworkRecord* find(NodeId network_id) const;
    std::size_t size() const { return records_.size(); }
    const std::map<NodeId, NetworkRecord>& records() const { return records_; }

  private:
    std::map<NodeId, NetworkRecord> records_;
};

} // namespace gcrs
