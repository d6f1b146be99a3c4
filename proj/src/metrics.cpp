#include "gcrs/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace gcrs {

namespace {

using Interval = std::pair<std::uint64_t, std::uint64_t>; // [start, end)

std::uint64_t union_length(std::vector<Interval> intervals, std::uint64_t clip_end) {
    for (auto& iv : intervals) {
        iv.second = std::min(iv.second, clip_end);
    }
    intervals.erase(std::remove_if(intervals.begin(), intervals.end(),
                                   [](const Interval& iv) { return iv.first >= iv.second; }),
                    intervals.end());
    std::sort(intervals.begin(), intervals.end());
    std::uint64_t total = 0;
    std::uint64_t cursor = 0;
    bool any = false;
    for (const auto& [start, end] : intervals) {
        if (!any || start > cursor) {
            total += end - start;
            cursor = end;
            any = true;
        } else if (end > cursor) {
            total += end - cursor;
            cursor = end;
        }
    }
    return total;
}

std::string format_double(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

} // namespace

MetricsReport compute_metrics(const std::vector<TraceEvent>& events,
                              const ScenarioConfig& config) {
    MetricsReport report;
    const std::uint64_t duration = config.duration_ticks;

    using BandKey = std::pair<NodeId, FrequencyBand>;
    std::map<BandKey, std::vector<Interval>> intervals;
    std::map<BandKey, std::optional<std::uint64_t>> open_primary;
    for (const auto& n : config.networks) {
        for (const auto& b : n.bands) {
            intervals[{n.network_id, b.band}];
            open_primary[{n.network_id, b.band}] = std::nullopt;
        }
    }

    // Open lessee transmissions: lease_id -> (owner key, start tick).
    std::map<std::uint64_t, std::pair<BandKey, std::uint64_t>> open_leases;
    // Query send ticks per (requester, msg_seq), for grant latency.
    std::map<std::pair<NodeId, std::uint64_t>, std::uint64_t> query_sent;
    double latency_sum = 0.0;
    std::uint64_t latency_count = 0;

    for (const auto& ev : events) {
        if (ev.kind == "transition") {
            const auto band = detail_band(ev, "band");
            const auto present = detail_value(ev, "primary");
            if (!band.has_value() || !present.has_value()) {
                continue;
            }
            const BandKey key{ev.src, *band};
            auto it = open_primary.find(key);
            if (it == open_primary.end()) {
                continue;
            }
            if (*present == "true") {
                if (!it->second.has_value()) {
                    it->second = ev.tick;
                }
            } else if (it->second.has_value()) {
                intervals[key].push_back({*it->second, ev.tick});
                it->second = std::nullopt;
            }
            continue;
        }
        if (ev.kind == "decode-error") {
            ++report.decode_errors;
            continue;
        }
        const auto msg = detail_string(ev, "msg");
        if (!msg.has_value()) {
            continue;
        }
        if (ev.kind == "send") {
            if (*msg == "SpectrumQuery") {
                const auto seq = detail_u64(ev, "msg_seq");
                if (seq.has_value()) {
                    query_sent[{ev.src, *seq}] = ev.tick;
                }
            } else if (*msg == "SpectrumResponse" && ev.src == config.crfc_node_id) {
                const auto status = detail_string(ev, "status");
                if (status == "granted") {
                    ++report.lease_grants;
                } else if (status == "no-spectrum") {
                    ++report.lease_denials;
                }
            } else if (*msg == "LeaseRevoke" && ev.src == config.crfc_node_id) {
                ++report.revocations;
            }
            continue;
        }
        if (ev.kind != "deliver") {
            continue;
        }
        if (*msg == "SpectrumResponse" && detail_string(ev, "status") == "granted") {
            const auto lease_id = detail_u64(ev, "lease_id");
            const auto lessor = detail_u64(ev, "lessor");
            const auto lessee = detail_u64(ev, "lessee");
            const auto band = detail_band(ev, "band");
            if (lease_id.has_value() && lessor.has_value() && band.has_value() &&
                lessee.has_value() && ev.dst == *lessee) {
                open_leases[*lease_id] = {
                    BandKey{static_cast<NodeId>(*lessor), *band}, ev.tick};
                const auto ref = detail_u64(ev, "query_ref");
                if (ref.has_value()) {
                    auto it = query_sent.find({ev.dst, *ref});
                    if (it != query_sent.end()) {
                        latency_sum += static_cast<double>(ev.tick - it->second);
                        ++latency_count;
                    }
                }
            }
        } else if (*msg == "LeaseRevoke") {
            const auto lease_id = detail_u64(ev, "lease_id");
            const auto lessee = detail_u64(ev, "lessee");
            if (lease_id.has_value() && lessee.has_value() && ev.dst == *lessee) {
                auto it = open_leases.find(*lease_id);
                if (it != open_leases.end()) {
                    intervals[it->second.first].push_back({it->second.second, ev.tick});
                    open_leases.erase(it);
                }
            }
        }
    }

    // Close whatever is still transmitting at the end of the run.
    for (auto& [key, open] : open_primary) {
        if (open.has_value()) {
            intervals[key].push_back({*open, duration});
        }
    }
    for (const auto& [lease_id, entry] : open_leases) {
        intervals[entry.first].push_back({entry.second, duration});
    }

    for (const auto& [key, ivs] : intervals) {
        BandUtilization u;
        u.network = key.first;
        u.band = key.second;
        u.transmitting_ticks = union_length(ivs, duration);
        u.utilization =
            duration == 0 ? 0.0
                          : static_cast<double>(u.transmitting_ticks) / static_cast<double>(duration);
        report.per_band.push_back(u);
    }
    report.mean_grant_latency_ticks =
        latency_count == 0 ? 0.0 : latency_sum / static_cast<double>(latency_count);
    return report;
}

std::string metrics_to_json(const MetricsReport& r) {
    std::string out = "{\"per_band\":[";
    for (std::size_t i = 0; i < r.per_band.size(); ++i) {
        const auto& u = r.per_band[i];
        if (i > 0) {
            out += ',';
        }
        out += "{\"network\":" + std::to_string(u.network) +
               ",\"low_hz\":" + std::to_string(u.band.low_hz) +
               ",\"high_hz\":" + std::to_string(u.band.high_hz) +
               ",\"transmitting_ticks\":" + std::to_string(u.transmitting_ticks) +
               ",\"utilization\":" + format_double(u.utilization, 6) + "}";
    }
    out += "],\"lease_grants\":" + std::to_string(r.lease_grants) +
           ",\"lease_denials\":" + std::to_string(r.lease_denials) +
           ",\"revocations\":" + std::to_string(r.revocations) +
           ",\"mean_grant_latency_ticks\":" + format_double(r.mean_grant_latency_ticks, 3) +
           ",\"decode_errors\":" + std::to_string(r.decode_errors) + "}";
    return out;
}

std::string metrics_to_table(const MetricsReport& r) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %-28s %12s %12s\n", "network", "band",
                  "tx_ticks", "utilization");
    out += line;
    for (const auto& u : r.per_band) {
        const std::string band =
            "[" + std::to_string(u.band.low_hz) + "," + std::to_string(u.band.high_hz) + ")";
        std::snprintf(line, sizeof line, "%-10u %-28s %12llu %12.3f\n", u.network, band.c_str(),
                      static_cast<unsigned long long>(u.transmitting_ticks), u.utilization);
        out += line;
    }
    std::snprintf(line, sizeof line,
                  "grants %llu  denials %llu  revocations %llu  mean_grant_latency %.3f  "
                  "decode_errors %llu\n",
                  static_cast<unsigned long long>(r.lease_grants),
                  static_cast<unsigned long long>(r.lease_denials),
                  static_cast<unsigned long long>(r.revocations), r.mean_grant_latency_ticks,
                  static_cast<unsigned long long>(r.decode_errors));
    out += line;
    return out;
}

} // namespace gcrs
