#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gcrs/uclt.hpp"
#include "gcrs/wire.hpp"

namespace gcrs {

/// One trace line. kind is one of: header, send, deliver, transition,
/// scripted, handover, routing-error, decode-error.
struct TraceEvent {
    std::uint64_t tick{0};
    std::uint64_t seq{0};
    std::string kind;
    NodeId src{0};
    NodeId dst{0};
    // detail is a flat ordered key->value map; values are rendered as JSON
    // numbers or strings. Stable ordering keeps traces byte-comparable.
    std::vector<std::pair<std::string, std::string>> detail; // value pre-rendered
};

struct TraceHeader {
    std::uint64_t seed{0};
    std::uint32_t tick_seconds{0};
    std::uint64_t duration_ticks{0};
};

std::string render_trace_line(const TraceEvent& ev);
std::string render_trace_header(const TraceHeader& header);

/// Payload summary fields for a message, in canonical field order.
std::vector<std::pair<std::string, std::string>> summarize_payload(const WireMessage& m);

struct ParsedTrace {
    TraceHeader header;
    std::vector<TraceEvent> events;
    std::vector<std::string> errors;

    bool ok() const { return errors.empty(); }
};

ParsedTrace parse_trace_lines(const std::vector<std::string>& lines);
ParsedTrace parse_trace_file(const std::string& path);

struct TraceDiff {
    bool identical{false};
    std::size_t first_divergent_line{0}; // 1-based; 0 when identical
    std::string left;
    std::string right;
};

TraceDiff diff_traces(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// JSON-string escaping for the hand-rolled serializer.
std::string json_escape(const std::string& s);

/// Helper for detail values.
inline std::string quoted_json(const std::string& s) { return "\"" + json_escape(s) + "\""; }

/// Raw pre-rendered detail fragment, or nullopt.
std::optional<std::string> detail_value(const TraceEvent& ev, const std::string& key);
/// Detail value as a string (quotes stripped) or as a u64; nullopt when
/// absent or of the wrong shape.
std::optional<std::string> detail_string(const TraceEvent& ev, const std::string& key);
std::optional<std::uint64_t> detail_u64(const TraceEvent& ev, const std::string& key);
/// Parses the "[low,high)" band rendering back into a band.
std::optional<FrequencyBand> detail_band(const TraceEvent& ev, const std::string& key);

} // namespace gcrs
