#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gcrs/constellation.hpp"
#include "gcrs/crfc.hpp"
#include "gcrs/link.hpp"
#include "gcrs/network.hpp"
#include "gcrs/time.hpp"

namespace gcrs {

/// Query issued automatically at sensing instants while every own band is
/// unavailable and the network holds no leased-in spectrum.
struct AutoQueryPolicy {
    bool enabled{false};
    AccessMode mode{AccessMode::dynamic};
    std::uint64_t width_hz{0};
    std::uint64_t duration_ticks{1};
    std::uint64_t min_duration_ticks{1};
};

struct ScenarioNetwork {
    NodeId network_id{0};
    RegionId region_id{0};
    std::uint32_t sensing_interval{1};
    std::vector<BandConfig> bands;
    PermissionSet permissions;
    AvailabilityWindow availability;
    AutoQueryPolicy auto_query;
};

struct ScriptedAction {
    enum class Kind : std::uint8_t { primary_return, query, cascade_reversal };
    UtcTime at{};
    Kind kind{Kind::primary_return};
    NodeId network_id{0};  // primary_return, query
    FrequencyBand band;    // primary_return
    SpectrumQuery query;   // query (requester == network_id)
};

struct ScenarioConfig {
    std::uint32_t tick_seconds{kDefaultTickSeconds};
    std::uint64_t duration_ticks{0};
    std::uint64_t global_seed{0};
    NodeId crfc_node_id{0};
    std::vector<Region> regions;
    std::vector<ScenarioNetwork> networks;
    std::vector<LinkConfig> links;
    std::vector<Satellite> satellites;
    std::vector<ScriptedAction> scripted_actions;
};

struct LoadResult {
    std::optional<ScenarioConfig> config;
    std::vector<std::string> errors;

    bool ok() const { return config.has_value() && errors.empty(); }
};

/// Parses and fully validates; either a config or the complete error list
/// (field paths included) — no partial configs escape.
LoadResult load_scenario(const std::filesystem::path& path);
LoadResult parse_scenario(const nlohmann::json& doc);

/// Cross-field validation, reusable on programmatically built configs.
std::vector<std::string> validate_scenario(const ScenarioConfig& config);

} // namespace gcrs
