#include "gcrs/wire.hpp"

#include <cstddef>
#include <stdexcept>

namespace gcrs {

namespace {

class ByteWriter {
  public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) {
        out_.push_back(static_cast<std::uint8_t>(v >> 8));
        out_.push_back(static_cast<std::uint8_t>(v));
    }
    void u32(std::uint32_t v) {
        for (int shift = 24; shift >= 0; shift -= 8) {
            out_.push_back(static_cast<std::uint8_t>(v >> shift));
        }
    }
    void u64(std::uint64_t v) {
        for (int shift = 56; shift >= 0; shift -= 8) {
            out_.push_back(static_cast<std::uint8_t>(v >> shift));
        }
    }
    void band(FrequencyBand b) {
        u64(b.low_hz);
        u64(b.high_hz);
    }
    void bands(const std::vector<FrequencyBand>& bs) {
        u16(static_cast<std::uint16_t>(bs.size()));
        for (const auto& b : bs) {
            band(b);
        }
    }
    void lease(const Lease& l) {
        u64(l.lease_id);
        u32(l.lessor);
        u32(l.lessee);
        band(l.band);
        u64(l.granted_at.ticks);
        u64(l.expires_at.ticks);
        u8(static_cast<std::uint8_t>(l.mode));
    }
    std::vector<std::uint8_t> take() { return std::move(out_); }

  private:
    std::vector<std::uint8_t> out_;
};

/// Cursor over the payload; any structural problem flips `bad`.
class ByteReader {
  public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(take(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(take(4)); }
    std::uint64_t u64() { return take(8); }
    FrequencyBand band() {
        FrequencyBand b;
        b.low_hz = u64();
        b.high_hz = u64();
        return b;
    }
    std::vector<FrequencyBand> bands() {
        const std::uint16_t count = u16();
        std::vector<FrequencyBand> out;
        if (bad || data_.size() - pos_ < static_cast<std::size_t>(count) * 16) {
            bad = true;
            return out;
        }
        out.reserve(count);
        for (std::uint16_t i = 0; i < count; ++i) {
            out.push_back(band());
        }
        return out;
    }
    Lease lease() {
        Lease l;
        l.lease_id = u64();
        l.lessor = u32();
        l.lessee = u32();
        l.band = band();
        l.granted_at.ticks = u64();
        l.expires_at.ticks = u64();
        l.mode = static_cast<AccessMode>(enum_u8(1));
        return l;
    }
    /// u8 constrained to [0, max]; out-of-range flips bad.
    std::uint8_t enum_u8(std::uint8_t max) {
        const std::uint8_t v = u8();
        if (v > max) {
            bad = true;
        }
        return v;
    }
    bool exhausted() const { return pos_ == data_.size(); }
    bool bad{false};

  private:
    std::uint64_t take(std::size_t n) {
        if (bad || data_.size() - pos_ < n) {
            bad = true;
            return 0;
        }
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < n; ++i) {
            v = (v << 8) | data_[pos_++];
        }
        return v;
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_{0};
};

std::vector<std::uint8_t> encode_payload(const Payload& payload) {
    ByteWriter w;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, SpectrumQuery>) {
                w.u32(p.requester);
                w.u64(p.needed_width_hz);
                w.u64(p.min_duration_ticks);
                w.u64(p.duration_ticks);
                w.u8(static_cast<std::uint8_t>(p.mode));
            } else if constexpr (std::is_same_v<T, SpectrumResponsePayload>) {
                w.u8(static_cast<std::uint8_t>(p.status));
                w.u32(p.query_ref);
                if (p.status == QueryStatus::granted) {
                    w.lease(*p.lease);
                } else if (p.status == QueryStatus::region_available) {
                    w.u32(p.region);
                    w.bands(p.region_idle_bands);
                }
            } else if constexpr (std::is_same_v<T, UcltUpdatePayload>) {
                const NetworkRecord& r = p.record;
                w.u32(r.network_id);
                w.u32(r.region_id);
                w.bands(r.occupied_bands);
                w.bands(r.idle_bands);
                w.u8(static_cast<std::uint8_t>(r.permissions.mode));
                w.u16(static_cast<std::uint16_t>(r.permissions.allowed.size()));
                for (NodeId id : r.permissions.allowed) {
                    w.u32(id);
                }
                w.u64(r.availability.from.ticks);
                w.u64(r.availability.until.ticks);
            } else if constexpr (std::is_same_v<T, ProbeRequestPayload>) {
                w.u32(p.query_ref);
                w.u64(p.needed_width_hz);
                w.u64(p.min_duration_ticks);
            } else if constexpr (std::is_same_v<T, StatusReportPayload>) {
                w.u32(p.query_ref);
                w.u32(p.region);
                w.u8(p.idle ? 1 : 0);
                w.bands(p.idle_bands);
            } else if constexpr (std::is_same_v<T, LeaseGrantPayload>) {
                w.lease(p.lease);
            } else if constexpr (std::is_same_v<T, LeaseRevokePayload>) {
                w.u64(p.lease_id);
                w.u32(p.lessor);
                w.u32(p.lessee);
                w.band(p.band);
                w.u8(static_cast<std::uint8_t>(p.reason));
            } else if constexpr (std::is_same_v<T, HandOverDirectivePayload>) {
                w.u32(p.from_entity);
                w.u32(p.to_entity);
                w.u32(p.region);
                w.u64(p.effective_at);
            }
        },
        payload);
    return w.take();
}

std::optional<Payload> decode_payload(MessageKind kind, ByteReader& r) {
    switch (kind) {
    case MessageKind::spectrum_query: {
        SpectrumQuery q;
        q.requester = r.u32();
        q.needed_width_hz = r.u64();
        q.min_duration_ticks = r.u64();
        q.duration_ticks = r.u64();
        q.mode = static_cast<AccessMode>(r.enum_u8(1));
        return Payload{q};
    }
    case MessageKind::spectrum_response: {
        SpectrumResponsePayload p;
        p.status = static_cast<QueryStatus>(r.enum_u8(3));
        p.query_ref = r.u32();
        if (r.bad) {
            return std::nullopt;
        }
        if (p.status == QueryStatus::granted) {
            p.lease = r.lease();
        } else if (p.status == QueryStatus::region_available) {
            p.region = r.u32();
            p.region_idle_bands = r.bands();
        }
        return Payload{p};
    }
    case MessageKind::uclt_update: {
        UcltUpdatePayload p;
        p.record.network_id = r.u32();
        p.record.region_id = r.u32();
        p.record.occupied_bands = r.bands();
        p.record.idle_bands = r.bands();
        p.record.permissions.mode = static_cast<PermissionMode>(r.enum_u8(1));
        const std::uint16_t allowed = r.u16();
        for (std::uint16_t i = 0; i < allowed && !r.bad; ++i) {
            p.record.permissions.allowed.insert(r.u32());
        }
        p.record.availability.from.ticks = r.u64();
        p.record.availability.until.ticks = r.u64();
        return Payload{p};
    }
    case MessageKind::probe_request: {
        ProbeRequestPayload p;
        p.query_ref = r.u32();
        p.needed_width_hz = r.u64();
        p.min_duration_ticks = r.u64();
        return Payload{p};
    }
    case MessageKind::status_report: {
        StatusReportPayload p;
        p.query_ref = r.u32();
        p.region = r.u32();
        p.idle = r.enum_u8(1) != 0;
        p.idle_bands = r.bands();
        return Payload{p};
    }
    case MessageKind::lease_grant: {
        LeaseGrantPayload p;
        p.lease = r.lease();
        return Payload{p};
    }
    case MessageKind::lease_revoke: {
        LeaseRevokePayload p;
        p.lease_id = r.u64();
        p.lessor = r.u32();
        p.lessee = r.u32();
        p.band = r.band();
        p.reason = static_cast<RevokeReason>(r.enum_u8(1));
        return Payload{p};
    }
    case MessageKind::hand_over_directive: {
        HandOverDirectivePayload p;
        p.from_entity = r.u32();
        p.to_entity = r.u32();
        p.region = r.u32();
        p.effective_at = r.u64();
        return Payload{p};
    }
    }
    return std::nullopt;
}

} // namespace

const char* to_string(MessageKind kind) {
    switch (kind) {
    case MessageKind::spectrum_query: return "SpectrumQuery";
    case MessageKind::spectrum_response: return "SpectrumResponse";
    case MessageKind::uclt_update: return "UcltUpdate";
    case MessageKind::probe_request: return "ProbeRequest";
    case MessageKind::status_report: return "StatusReport";
    case MessageKind::lease_grant: return "LeaseGrant";
    case MessageKind::lease_revoke: return "LeaseRevoke";
    case MessageKind::hand_over_directive: return "HandOverDirective";
    }
    return "Unknown";
}

const char* to_string(DecodeError err) {
    switch (err) {
    case DecodeError::truncated: return "truncated";
    case DecodeError::bad_magic: return "bad-magic";
    case DecodeError::bad_version: return "bad-version";
    case DecodeError::unknown_kind: return "unknown-kind";
    case DecodeError::bad_length: return "bad-length";
    }
    return "unknown";
}

std::vector<std::uint8_t> encode_frame(const WireMessage& m) {
    const std::vector<std::uint8_t> payload = encode_payload(m.payload);
    if (payload.size() > kMaxPayloadBytes) {
        throw std::length_error("wire payload exceeds 64 KiB");
    }
    ByteWriter w;
    w.u32(kWireMagic);
    w.u8(kWireVersion);
    w.u8(static_cast<std::uint8_t>(m.kind()));
    w.u32(m.src);
    w.u32(m.dst);
    w.u32(m.seq);
    w.u64(m.sent_at.ticks);
    w.u32(static_cast<std::uint32_t>(payload.size()));
    std::vector<std::uint8_t> out = w.take();
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

std::variant<WireMessage, DecodeError> decode_frame(std::span<const std::uint8_t> bytes) {
    constexpr std::size_t kHeaderBytes = 4 + 1 + 1 + 4 + 4 + 4 + 8 + 4;
    if (bytes.size() < kHeaderBytes) {
        return DecodeError::truncated;
    }
    ByteReader header(bytes.subspan(0, kHeaderBytes));
    if (header.u32() != kWireMagic) {
        return DecodeError::bad_magic;
    }
    if (header.u8() != kWireVersion) {
        return DecodeError::bad_version;
    }
    const std::uint8_t kind_byte = header.u8();
    if (kind_byte < 1 || kind_byte > 8) {
        return DecodeError::unknown_kind;
    }
    WireMessage m;
    m.src = header.u32();
    m.dst = header.u32();
    m.seq = header.u32();
    m.sent_at.ticks = header.u64();
    const std::uint32_t payload_len = header.u32();
    if (payload_len > kMaxPayloadBytes) {
        return DecodeError::bad_length;
    }
    if (bytes.size() - kHeaderBytes < payload_len) {
        return DecodeError::truncated;
    }
    if (bytes.size() - kHeaderBytes > payload_len) {
        return DecodeError::bad_length;
    }
    ByteReader r(bytes.subspan(kHeaderBytes, payload_len));
    auto payload = decode_payload(static_cast<MessageKind>(kind_byte), r);
    if (!payload.has_value() || r.bad || !r.exhausted()) {
        return DecodeError::bad_length;
    }
    m.payload = std::move(*payload);
    return m;
}

} // namespace gcrs
