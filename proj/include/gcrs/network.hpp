#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gcrs/band.hpp"
#include "gcrs/crfc.hpp"
#include "gcrs/rng.hpp"
#include "gcrs/time.hpp"
#include "gcrs/uclt.hpp"

namespace gcrs {

enum class Occupancy : std::uint8_t {
    occupied_by_primary,
    idle,
    leased_out,
    leased_in,
};

enum class SenseResult : std::uint8_t {
    hole_detected,
    primary_present,
};

struct MarkovParams {
    double p_on_to_off{0.0}; // per-tick, occupied -> idle
    double p_off_to_on{0.0}; // per-tick, idle -> occupied
    bool initially_occupied{true};

    friend bool operator==(const MarkovParams&, const MarkovParams&) = default;
};

/// Primary-user presence evolution for one band: a deterministic daily
/// schedule (opportunistic-style absence) or a two-state chain
/// (probabilistic presence, dynamic-style).
struct PrimaryUserModel {
    enum class Kind : std::uint8_t { diurnal, markov };
    Kind kind{Kind::diurnal};
    DowntimeWindow downtime; // kind == diurnal
    MarkovParams markov;     // kind == markov

    friend bool operator==(const PrimaryUserModel&, const PrimaryUserModel&) = default;
};

struct BandConfig {
    FrequencyBand band;
    PrimaryUserModel model;

    friend bool operator==(const BandConfig&, const BandConfig&) = default;
};

/// New primary presence for a band, emitted on every flip (and once per
/// band on the first advance, to publish the initial state).
struct TransitionNotice {
    FrequencyBand band;
    bool primary_present{false};
};

struct NetworkConfig {
    NodeId network_id{0};
    Region region;
    std::uint32_t sensing_interval{1}; // ticks between sensing instants
    std::vector<BandConfig> bands;
    PermissionSet permissions;
    AvailabilityWindow availability;
};

struct LeasedInBand {
    LeaseId lease_id{0};
    NodeId lessor{0};
    FrequencyBand band;
    UtcTime expires_at{};
};

/// One country-level network: evolves primary occupancy on its own bands,
/// senses them on a sampled schedule, and tracks leases in both directions.
class RegionalNetwork {
  public:
    RegionalNetwork(NetworkConfig config, std::uint64_t seed, std::uint32_t tick_seconds);

    NodeId id() const { return config_.network_id; }
    const NetworkConfig& config() const { return config_; }

    /// Evolves primary presence one step. Diurnal bands follow their
    /// window exactly; markov bands draw one uniform each (fixed draw
    /// order, so runs replay bit-for-bit under a fixed seed). Also
    /// releases leased-out bands whose lease has expired.
    std::vector<TransitionNotice> advance_occupancy(UtcTime now);

    /// Refreshes the sampled readings. The simulator calls this at every
    /// sensing instant (now % sensing_interval == 0).
    void record_sensing(UtcTime now);

    /// Last sampled reading for an own band; between sensing instants this
    /// is the value from the most recent instant. Sensing is perfect but
    /// sampled.
    SenseResult sense_band(FrequencyBand band) const;

    /// Forces the primary back onto a band (scripted or chain-driven).
    /// Already-occupied bands are a no-op.
    std::vector<TransitionNotice> handle_primary_return(FrequencyBand band, UtcTime now);

    Occupancy occupancy(FrequencyBand band) const;
    bool primary_present(FrequencyBand band) const;

    /// Lessor side: band granted away / released back.
    void mark_leased_out(FrequencyBand band, UtcTime expires_at);
    void clear_leased_out(FrequencyBand band);
    std::optional<UtcTime> leased_out_expiry(FrequencyBand band) const;

    /// Lessee side.
    void add_leased_in(const LeasedInBand& grant);
    bool remove_leased_in(LeaseId lease_id);
    const std::vector<LeasedInBand>& leased_in() const { return leased_in_; }

    /// No own band currently usable (idle) at the latest sensing readings:
    /// the trigger for querying remote spectrum.
    bool busy_at_last_sensing() const;

    /// Any own band idle right now with at least the given width, and the
    /// availability window covering min_duration from now. The satellite
    /// probe answer.
    std::vector<FrequencyBand> idle_bands_for_probe(std::uint64_t needed_width_hz,
                                                    std::uint64_t min_duration_ticks,
                                                    UtcTime now) const;

    /// Registry row reflecting current occupancy: occupied = primary
    /// present; idle = idle and not leased out.
    NetworkRecord current_record() const;

  private:
    struct OwnBand {
        BandConfig cfg;
        bool primary{true};
        bool has_reported{false};     // first advance publishes initial state
        bool leased_out{false};
        UtcTime lease_expires{};
        bool last_reading_primary{true};
        bool has_reading{false};
    };

    OwnBand* find_own(FrequencyBand band);
    const OwnBand* find_own(FrequencyBand band) const;
    bool model_presence(const OwnBand& b, UtcTime now);

    NetworkConfig config_;
    std::uint32_t tick_seconds_;
    DeterministicRng rng_;
    std::vector<OwnBand> own_;
    std::vector<LeasedInBand> leased_in_;
};

} // namespace gcrs
