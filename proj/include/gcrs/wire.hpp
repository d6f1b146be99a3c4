#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gcrs/band.hpp"
#include "gcrs/crfc.hpp"
#include "gcrs/time.hpp"
#include "gcrs/uclt.hpp"

namespace gcrs {

inline constexpr std::uint32_t kWireMagic = 0x47435253; // "GCRS"
inline constexpr std::uint8_t kWireVersion = 1;
inline constexpr std::size_t kMaxPayloadBytes = 64 * 1024;

enum class MessageKind : std::uint8_t {
    spectrum_query = 1,
    spectrum_response = 2,
    uclt_update = 3,
    probe_request = 4,
    status_report = 5,
    lease_grant = 6,
    lease_revoke = 7,
    hand_over_directive = 8,
};

const char* to_string(MessageKind kind);

struct SpectrumResponsePayload {
    QueryStatus status{QueryStatus::no_spectrum};
    std::uint32_t query_ref{0};          // header seq of the query answered
    std::optional<Lease> lease;          // status == granted
    RegionId region{0};                  // status == region_available
    std::vector<FrequencyBand> region_idle_bands; // status == region_available

    friend bool operator==(const SpectrumResponsePayload&,
                           const SpectrumResponsePayload&) = default;
};

struct UcltUpdatePayload {
    NetworkRecord record;

    friend bool operator==(const UcltUpdatePayload&, const UcltUpdatePayload&) = default;
};

struct ProbeRequestPayload {
    std::uint32_t query_ref{0};
    std::uint64_t needed_width_hz{0};
    std::uint64_t min_duration_ticks{1};

    friend bool operator==(const ProbeRequestPayload&, const ProbeRequestPayload&) = default;
};

struct StatusReportPayload {
    std::uint32_t query_ref{0};
    RegionId region{0};
    bool idle{false};
    std::vector<FrequencyBand> idle_bands;

    friend bool operator==(const StatusReportPayload&, const StatusReportPayload&) = default;
};

struct LeaseGrantPayload {
    Lease lease;

    friend bool operator==(const LeaseGrantPayload&, const LeaseGrantPayload&) = default;
};

struct LeaseRevokePayload {
    LeaseId lease_id{0};
    NodeId lessor{0};
    NodeId lessee{0};
    FrequencyBand band;
    RevokeReason reason{RevokeReason::expired};

    friend bool operator==(const LeaseRevokePayload&, const LeaseRevokePayload&) = default;
};

struct HandOverDirectivePayload {
    std::uint32_t from_entity{0}; // current duty holder (satellite or ground)
    std::uint32_t to_entity{0};   // entity taking the duty over
    RegionId region{0};
    std::uint64_t effective_at{0};

    friend bool operator==(const HandOverDirectivePayload&,
                           const HandOverDirectivePayload&) = default;
};

using Payload = std::variant<SpectrumQuery,          // spectrum_query
                             SpectrumResponsePayload, // spectrum_response
                             UcltUpdatePayload,       // uclt_update
                             ProbeRequestPayload,     // probe_request
                             StatusReportPayload,     // status_report
                             LeaseGrantPayload,       // lease_grant
                             LeaseRevokePayload,      // lease_revoke
                             HandOverDirectivePayload>; // hand_over_directive

/// One protocol message. src/dst are hop endpoints; seq is strictly
/// increasing per (src, dst) pair (assigned by the sending gateway).
struct WireMessage {
    NodeId src{0};
    NodeId dst{0};
    std::uint32_t seq{0};
    UtcTime sent_at{};
    Payload payload;

    MessageKind kind() const {
        return static_cast<MessageKind>(payload.index() + 1);
    }

    friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

enum class DecodeError : std::uint8_t {
    truncated,
    bad_magic,
    bad_version,
    unknown_kind,
    bad_length,
};

const char* to_string(DecodeError err);

/// Canonical big-endian frame:
///   magic u32 | version u8 | kind u8 | src u32 | dst u32 | seq u32
///   | sent_at u64 | payload_len u32 | payload bytes.
/// Per-kind payload layouts are documented in docs/protocol.md.
/// Throws std::length_error if the payload exceeds 64 KiB.
std::vector<std::uint8_t> encode_frame(const WireMessage& m);

/// Inverse of encode_frame on valid frames. Consumes exactly one frame;
/// trailing bytes are a bad_length error.
std::variant<WireMessage, DecodeError> decode_frame(std::span<const std::uint8_t> bytes);

} // namespace gcrs
