#include "gcrs/trace.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

namespace gcrs {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out;
}

std::string render_trace_line(const TraceEvent& ev) {
    std::string out = "{\"tick\":" + std::to_string(ev.tick) +
                      ",\"seq\":" + std::to_string(ev.seq) + ",\"kind\":\"" + ev.kind +
                      "\",\"src\":" + std::to_string(ev.src) +
                      ",\"dst\":" + std::to_string(ev.dst);
    if (!ev.detail.empty()) {
        out += ",\"detail\":{";
        bool first = true;
        for (const auto& [key, value] : ev.detail) {
            if (!first) {
                out += ',';
            }
            first = false;
            out += '"';
            out += key;
            out += "\":";
            out += value;
        }
        out += '}';
    }
    out += '}';
    return out;
}

std::string render_trace_header(const TraceHeader& h) {
    return "{\"kind\":\"header\",\"seed\":" + std::to_string(h.seed) +
           ",\"tick_seconds\":" + std::to_string(h.tick_seconds) +
           ",\"duration_ticks\":" + std::to_string(h.duration_ticks) + "}";
}

namespace {

std::string band_text(FrequencyBand b) {
    return quoted_json("[" + std::to_string(b.low_hz) + "," + std::to_string(b.high_hz) + ")");
}

std::string bands_text(const std::vector<FrequencyBand>& bands) {
    std::string s = "[";
    for (std::size_t i = 0; i < bands.size(); ++i) {
        if (i > 0) {
            s += ',';
        }
        s += band_text(bands[i]);
    }
    s += ']';
    return s;
}

const char* mode_name(AccessMode m) {
    return m == AccessMode::opportunistic ? "opportunistic" : "dynamic";
}

const char* status_name(QueryStatus s) {
    switch (s) {
    case QueryStatus::granted: return "granted";
    case QueryStatus::no_spectrum: return "no-spectrum";
    case QueryStatus::unknown_requester: return "unknown-requester";
    case QueryStatus::region_available: return "region-available";
    }
    return "?";
}

void summarize_lease(std::vector<std::pair<std::string, std::string>>& d, const Lease& l) {
    d.emplace_back("lease_id", std::to_string(l.lease_id));
    d.emplace_back("lessor", std::to_string(l.lessor));
    d.emplace_back("lessee", std::to_string(l.lessee));
    d.emplace_back("band", band_text(l.band));
    d.emplace_back("granted_at", std::to_string(l.granted_at.ticks));
    d.emplace_back("expires_at", std::to_string(l.expires_at.ticks));
    d.emplace_back("mode", quoted_json(mode_name(l.mode)));
}

} // namespace

std::vector<std::pair<std::string, std::string>> summarize_payload(const WireMessage& m) {
    std::vector<std::pair<std::string, std::string>> d;
    d.emplace_back("msg", quoted_json(to_string(m.kind())));
    d.emplace_back("msg_seq", std::to_string(m.seq));
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, SpectrumQuery>) {
                d.emplace_back("requester", std::to_string(p.requester));
                d.emplace_back("width_hz", std::to_string(p.needed_width_hz));
                d.emplace_back("min_duration", std::to_string(p.min_duration_ticks));
                d.emplace_back("duration", std::to_string(p.duration_ticks));
                d.emplace_back("mode", quoted_json(mode_name(p.mode)));
            } else if constexpr (std::is_same_v<T, SpectrumResponsePayload>) {
                d.emplace_back("status", quoted_json(status_name(p.status)));
                d.emplace_back("query_ref", std::to_string(p.query_ref));
                if (p.lease.has_value()) {
                    summarize_lease(d, *p.lease);
                }
                if (p.status == QueryStatus::region_available) {
                    d.emplace_back("region", std::to_string(p.region));
                    d.emplace_back("idle_bands", bands_text(p.region_idle_bands));
                }
            } else if constexpr (std::is_same_v<T, UcltUpdatePayload>) {
                d.emplace_back("network", std::to_string(p.record.network_id));
                d.emplace_back("region", std::to_string(p.record.region_id));
                d.emplace_back("occupied", bands_text(p.record.occupied_bands));
                d.emplace_back("idle", bands_text(p.record.idle_bands));
            } else if constexpr (std::is_same_v<T, ProbeRequestPayload>) {
                d.emplace_back("query_ref", std::to_string(p.query_ref));
                d.emplace_back("width_hz", std::to_string(p.needed_width_hz));
            } else if constexpr (std::is_same_v<T, StatusReportPayload>) {
                d.emplace_back("query_ref", std::to_string(p.query_ref));
                d.emplace_back("region", std::to_string(p.region));
                d.emplace_back("idle", p.idle ? "true" : "false");
                d.emplace_back("idle_bands", bands_text(p.idle_bands));
            } else if constexpr (std::is_same_v<T, LeaseGrantPayload>) {
                summarize_lease(d, p.lease);
            } else if constexpr (std::is_same_v<T, LeaseRevokePayload>) {
                d.emplace_back("lease_id", std::to_string(p.lease_id));
                d.emplace_back("lessor", std::to_string(p.lessor));
                d.emplace_back("lessee", std::to_string(p.lessee));
                d.emplace_back("band", band_text(p.band));
                d.emplace_back("reason", quoted_json(p.reason == RevokeReason::expired
                                                    ? "expired"
                                                    : "primary-returned"));
            } else if constexpr (std::is_same_v<T, HandOverDirectivePayload>) {
                d.emplace_back("from", std::to_string(p.from_entity));
                d.emplace_back("to", std::to_string(p.to_entity));
                d.emplace_back("region", std::to_string(p.region));
                d.emplace_back("effective_at", std::to_string(p.effective_at));
            }
        },
        m.payload);
    return d;
}

ParsedTrace parse_trace_lines(const std::vector<std::string>& lines) {
    ParsedTrace out;
    bool saw_header = false;
    std::size_t line_no = 0;
    for (const auto& line : lines) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object()) {
            out.errors.push_back("line " + std::to_string(line_no) + ": not a JSON object");
            continue;
        }
        const std::string kind = j.value("kind", "");
        if (kind == "header") {
            out.header.seed = j.value("seed", 0ULL);
            out.header.tick_seconds = j.value("tick_seconds", 0U);
            out.header.duration_ticks = j.value("duration_ticks", 0ULL);
            saw_header = true;
            continue;
        }
        TraceEvent ev;
        ev.tick = j.value("tick", 0ULL);
        ev.seq = j.value("seq", 0ULL);
        ev.kind = kind;
        ev.src = j.value("src", 0U);
        ev.dst = j.value("dst", 0U);
        if (j.contains("detail") && j.at("detail").is_object()) {
            for (const auto& [key, value] : j.at("detail").items()) {
                if (value.is_string()) {
                    ev.detail.emplace_back(key, quoted_json(value.get<std::string>()));
                } else {
                    ev.detail.emplace_back(key, value.dump());
                }
            }
        }
        out.events.push_back(std::move(ev));
    }
    if (!saw_header) {
        out.errors.push_back("trace has no header line");
    }
    return out;
}

ParsedTrace parse_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        ParsedTrace out;
        out.errors.push_back("cannot open trace file: " + path);
        return out;
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    return parse_trace_lines(lines);
}

std::optional<std::string> detail_value(const TraceEvent& ev, const std::string& key) {
    for (const auto& [k, v] : ev.detail) {
        if (k == key) {
            return v;
        }
    }
    return std::nullopt;
}

std::optional<std::string> detail_string(const TraceEvent& ev, const std::string& key) {
    auto v = detail_value(ev, key);
    if (!v.has_value() || v->size() < 2 || v->front() != '"' || v->back() != '"') {
        return std::nullopt;
    }
    return v->substr(1, v->size() - 2);
}

std::optional<std::uint64_t> detail_u64(const TraceEvent& ev, const std::string& key) {
    auto v = detail_value(ev, key);
    if (!v.has_value() || v->empty() || v->front() == '"') {
        return std::nullopt;
    }
    return std::strtoull(v->c_str(), nullptr, 10);
}

std::optional<FrequencyBand> detail_band(const TraceEvent& ev, const std::string& key) {
    auto s = detail_string(ev, key);
    if (!s.has_value() || s->size() < 4 || s->front() != '[' || s->back() != ')') {
        return std::nullopt;
    }
    const auto comma = s->find(',');
    if (comma == std::string::npos) {
        return std::nullopt;
    }
    FrequencyBand b;
    b.low_hz = std::strtoull(s->c_str() + 1, nullptr, 10);
    b.high_hz = std::strtoull(s->c_str() + comma + 1, nullptr, 10);
    return b;
}

TraceDiff diff_traces(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    TraceDiff diff;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] != b[i]) {
            diff.first_divergent_line = i + 1;
            diff.left = a[i];
            diff.right = b[i];
            return diff;
        }
    }
    if (a.size() != b.size()) {
        diff.first_divergent_line = n + 1;
        diff.left = a.size() > n ? a[n] : "<end of trace>";
        diff.right = b.size() > n ? b[n] : "<end of trace>";
        return diff;
    }
    diff.identical = true;
    return diff;
}

} // namespace gcrs
