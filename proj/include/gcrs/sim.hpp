#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gcrs/metrics.hpp"
#include "gcrs/scenario.hpp"
#include "gcrs/trace.hpp"

namespace gcrs {

struct SimResult {
    std::vector<std::string> trace_lines; // header line first
    std::vector<TraceEvent> events;       // parsed form, header excluded
    MetricsReport metrics;
};

/// Runs the scenario to duration_ticks on a single-threaded event loop.
/// Events pop in (at, seq) order with seq assigned at enqueue, so identical
/// config + seed reproduces a byte-identical trace. Checked builds assert
/// module invariants after every event; all builds check at run end. An
/// invariant violation throws std::logic_error naming the event index.
SimResult run_simulation(const ScenarioConfig& config,
                         std::optional<std::uint64_t> seed_override = std::nullopt);

} // namespace gcrs
