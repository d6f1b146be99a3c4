#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gcrs/band.hpp"
#include "gcrs/time.hpp"
#include "gcrs/uclt.hpp"

namespace gcrs {

enum class AccessMode : std::uint8_t {
    opportunistic = 0, // primary expected absent for the whole grant
    dynamic = 1,       // continuous sensing, hand back on primary return
};

using LeaseId = std::uint64_t;

/// A time-bounded, revocable grant of a remote band.
struct Lease {
    LeaseId lease_id{0};
    NodeId lessor{0};
    NodeId lessee{0};
    FrequencyBand band;
    UtcTime granted_at{};
    UtcTime expires_at{}; // granted_at < expires_at
    AccessMode mode{AccessMode::opportunistic};

    friend bool operator==(const Lease&, const Lease&) = default;
};

struct SpectrumQuery {
    NodeId requester{0};
    std::uint64_t needed_width_hz{0};
    std::uint64_t min_duration_ticks{1}; // lookup filter
    std::uint64_t duration_ticks{1};     // requested lease length
    AccessMode mode{AccessMode::dynamic};

    friend bool operator==(const SpectrumQuery&, const SpectrumQuery&) = default;
};

enum class QueryStatus : std::uint8_t {
    granted = 0,
    no_spectrum = 1,
    unknown_requester = 2,
    region_available = 3, // satellite path: a region was found, no lease
};

enum class RevokeReason : std::uint8_t {
    expired = 0,
    primary_returned = 1,
};

struct Revocation {
    Lease lease;
    RevokeReason reason{RevokeReason::expired};
};

struct QueryOutcome {
    QueryStatus status{QueryStatus::no_spectrum};
    std::optional<Lease> lease; // set iff status == granted
};

/// Cognitive Radio Function Coordinator: owns the UCLT and the lease table,
/// answers spectrum queries, and guarantees no double allocation. A
/// single-threaded state machine; callers serialize all calls.
class Crfc {
  public:
    explicit Crfc(NodeId node_id) : node_id_(node_id) {}

    NodeId node_id() const { return node_id_; }
    Uclt& uclt() { return uclt_; }
    const Uclt& uclt() const { return uclt_; }

    /// Networks are registered up front (scenario load); a query from an
    /// unregistered id is a protocol error, not a lookup miss.
    void register_network(NodeId id, RegionId region);
    bool is_registered(NodeId id) const { return known_networks_.count(id) > 0; }
    std::optional<RegionId> region_of_network(NodeId id) const;

    /// Grants the first UCLT candidate that conflicts with no active lease.
    /// Expired records are purged before lookup.
    QueryOutcome handle_query(const SpectrumQuery& q, UtcTime now);

    /// Removes every active lease of `lessor` overlapping `band`, one
    /// revocation per removed lease. Revoking nothing is a no-op.
    std::vector<Revocation> revoke_on_primary_return(NodeId lessor, FrequencyBand band,
                                                     UtcTime now);

    /// Removes every lease with expires_at <= now. Idempotent at fixed now.
    std::vector<Revocation> expire_leases(UtcTime now);

    /// Active leases in grant order (lease_id ascending).
    const std::vector<Lease>& active_leases() const { return active_; }

    /// Exclusivity: no two active leases of one lessor overlap in frequency.
    bool lease_table_valid() const;

  private:
    bool conflicts_with_active(NodeId lessor, FrequencyBand band) const;

    NodeId node_id_;
    Uclt uclt_;
    std::map<NodeId, RegionId> known_networks_;
    std::vector<Lease> active_;
    LeaseId next_lease_id_{1};
};

} // namespace gcrs
