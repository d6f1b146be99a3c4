#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "gcrs/crfc.hpp"
#include "gcrs/uclt.hpp"
#include "gcrs/wire.hpp"

namespace gcrs {

struct Satellite {
    NodeId sat_id{0};
    RegionId responsible_region{0}; // duty at constellation start
    std::uint32_t ring_position{0}; // permutation 0..N-1
};

/// region -> responsible entity (a satellite, or a ground network that
/// absorbed satellite duties after a cascade). Total and injective over
/// the constellation's regions at all times.
class ResponsibilityMap {
  public:
    void assign(RegionId region, NodeId entity);
    std::optional<NodeId> responsible_for(RegionId region) const;
    std::optional<RegionId> region_of(NodeId entity) const;
    bool total_and_injective(const std::vector<RegionId>& regions) const;
    const std::map<RegionId, NodeId>& assignment() const { return assignment_; }

  private:
    std::map<RegionId, NodeId> assignment_;
};

/// Ordered satellite ids from the idle-region satellite to the busy-region
/// satellite along the ring; consecutive entries are ring-adjacent.
struct HandOverChain {
    std::vector<NodeId> sats;

    friend bool operator==(const HandOverChain&, const HandOverChain&) = default;
};

/// A ring of satellites, one responsible region each. The cascade shifts
/// duties along a chain so the satellite over a busy region comes free.
class Constellation {
  public:
    /// Throws std::invalid_argument unless ring positions are a
    /// permutation 0..N-1 and sat/region ids are unique.
    explicit Constellation(std::vector<Satellite> sats);

    std::size_t size() const { return by_position_.size(); }
    const std::vector<Satellite>& satellites() const { return by_position_; }
    const ResponsibilityMap& responsibility() const { return duties_; }
    std::vector<RegionId> regions() const;

    /// Entity currently covering the region (satellite or substituted
    /// ground network).
    std::optional<NodeId> responsible_for(RegionId region) const;

    /// Satellite whose *initial* duty is the region; used for routing.
    std::optional<NodeId> home_satellite(RegionId region) const;

    bool is_free(NodeId sat_id) const;
    /// Extra-capacity attachment of a freed satellite, if any.
    std::optional<RegionId> attached_region(NodeId sat_id) const;

    /// Shorter ring path from idle_sat to busy_sat; length-ties walk
    /// toward descending ring position. Throws std::invalid_argument when
    /// busy == idle or either id is unknown.
    HandOverChain compute_handover_chain(NodeId busy_sat, NodeId idle_sat) const;

    /// Applies the cascade: chain[0]'s region goes to the idle ground
    /// network, every later chain member takes its predecessor-in-chain's
    /// old region, and the last satellite comes free, attached to the busy
    /// region as extra capacity. Emits one directive per duty transfer, in
    /// chain order. Throws std::invalid_argument (state untouched) on an
    /// invalid chain.
    std::vector<HandOverDirectivePayload> execute_cascade(const HandOverChain& chain,
                                                          NodeId idle_ground_network,
                                                          UtcTime now);

    /// Plans the cascade directives without mutating state (the simulator
    /// applies them one by one as they are delivered). Same validation as
    /// execute_cascade.
    std::vector<HandOverDirectivePayload> plan_cascade(const HandOverChain& chain,
                                                       NodeId idle_ground_network,
                                                       UtcTime now) const;

    /// One duty reassignment (normally a delivered directive). Keeps the
    /// map total and injective at every application.
    void apply_directive(const HandOverDirectivePayload& directive);

    /// Directives returning every region to its initial satellite, ordered
    /// so that each single application keeps the map injective.
    std::vector<HandOverDirectivePayload> compute_reversal_directives(UtcTime now) const;

  private:
    const Satellite* find_sat(NodeId sat_id) const;
    std::vector<HandOverDirectivePayload> validate_and_plan(const HandOverChain& chain,
                                                            NodeId idle_ground_network,
                                                            UtcTime now) const;

    std::vector<Satellite> by_position_; // index == ring_position
    ResponsibilityMap duties_;
    std::map<RegionId, NodeId> baseline_; // initial assignment
    std::map<NodeId, RegionId> attached_; // freed sat -> region it left
};

/// Region view consumed by the query sequence: one representative network
/// per region plus its probe answer.
struct RegionStatus {
    RegionId region{0};
    NodeId network{0};
    bool idle{false};
    std::vector<FrequencyBand> idle_bands;
};

struct QuerySequenceResult {
    std::vector<WireMessage> trace; // steps 1-8 in order
    std::optional<RegionId> chosen_region;
    std::optional<int> failed_at_step; // routing failure, if any
};

/// Canonical transcript of the eight query/probe/status/response steps:
///   1 busy network -> its satellite   (query)
///   2 satellite -> coordinator        (query)
///   3 coordinator -> every satellite  (probe)
///   4 satellite -> its region         (probe)
///   5 region -> satellite             (status)
///   6 satellite -> coordinator        (status)
///   7 coordinator -> asking satellite (response)
///   8 satellite -> busy network       (response)
/// The chosen region is the lowest region id reporting idle, the busy
/// region excluded; nullopt when nobody is idle.
QuerySequenceResult run_query_sequence(const Constellation& constellation, NodeId crfc_id,
                                       NodeId busy_network, RegionId busy_region,
                                       const SpectrumQuery& query,
                                       const std::vector<RegionStatus>& statuses, UtcTime now);

} // namespace gcrs
