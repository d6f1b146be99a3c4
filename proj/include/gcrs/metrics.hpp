#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gcrs/band.hpp"
#include "gcrs/scenario.hpp"
#include "gcrs/trace.hpp"
#include "gcrs/uclt.hpp"

namespace gcrs {

struct BandUtilization {
    NodeId network{0};
    FrequencyBand band;
    std::uint64_t transmitting_ticks{0};
    double utilization{0.0}; // transmitting / duration, in [0, 1]
};

struct MetricsReport {
    std::vector<BandUtilization> per_band; // owner network id, then band
    std::uint64_t lease_grants{0};
    std::uint64_t lease_denials{0};
    std::uint64_t revocations{0};
    double mean_grant_latency_ticks{0.0}; // query emission -> grant delivery
    std::uint64_t decode_errors{0};
};

/// Replays the trace: a band transmits while the primary is present and
/// while a lessee holds a delivered, unrevoked lease on it.
MetricsReport compute_metrics(const std::vector<TraceEvent>& events,
                              const ScenarioConfig& config);

std::string metrics_to_json(const MetricsReport& report);
std::string metrics_to_table(const MetricsReport& report);

} // namespace gcrs
