#include "gcrs/scenario.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace gcrs {

namespace {

using nlohmann::json;

/// Collects errors with field paths; parsing keeps going so the caller
/// sees every problem at once.
struct Ctx {
    std::vector<std::string>& errors;

    void fail(const std::string& path, const std::string& why) {
        errors.push_back(path + ": " + why);
    }
};

void check_keys(Ctx& ctx, const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) {
            ctx.fail(path + "." + key, "unknown field");
        }
    }
}

std::uint64_t get_u64(Ctx& ctx, const json& obj, const std::string& path, const char* key,
                      std::optional<std::uint64_t> fallback = std::nullopt) {
    if (!obj.contains(key)) {
        if (fallback.has_value()) {
            return *fallback;
        }
        ctx.fail(path + "." + key, "missing required field");
        return 0;
    }
    const json& v = obj.at(key);
    if (!v.is_number_unsigned()) {
        ctx.fail(path + "." + key, "expected an unsigned integer");
        return 0;
    }
    return v.get<std::uint64_t>();
}

std::int64_t get_i64(Ctx& ctx, const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) {
        ctx.fail(path + "." + key, "missing required field");
        return 0;
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
        ctx.fail(path + "." + key, "expected an integer");
        return 0;
    }
    return v.get<std::int64_t>();
}

double get_prob(Ctx& ctx, const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) {
        ctx.fail(path + "." + key, "missing required field");
        return 0.0;
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
        ctx.fail(path + "." + key, "expected a number");
        return 0.0;
    }
    const double p = v.get<double>();
    if (p < 0.0 || p > 1.0) {
        ctx.fail(path + "." + key, "probability outside [0, 1]");
        return 0.0;
    }
    return p;
}

std::string get_string(Ctx& ctx, const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key) || !obj.at(key).is_string()) {
        ctx.fail(path + "." + key, "expected a string");
        return {};
    }
    return obj.at(key).get<std::string>();
}

bool get_bool(Ctx& ctx, const json& obj, const std::string& path, const char* key,
              bool fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    if (!obj.at(key).is_boolean()) {
        ctx.fail(path + "." + key, "expected a boolean");
        return fallback;
    }
    return obj.at(key).get<bool>();
}

FrequencyBand parse_band(Ctx& ctx, const json& obj, const std::string& path) {
    FrequencyBand b;
    if (!obj.is_object()) {
        ctx.fail(path, "expected an object with low_hz/high_hz");
        return b;
    }
    check_keys(ctx, obj, path, {"low_hz", "high_hz"});
    b.low_hz = get_u64(ctx, obj, path, "low_hz");
    b.high_hz = get_u64(ctx, obj, path, "high_hz");
    if (b.low_hz >= b.high_hz) {
        ctx.fail(path, "band must satisfy low_hz < high_hz");
    }
    return b;
}

DowntimeWindow parse_downtime(Ctx& ctx, const json& obj, const std::string& path) {
    DowntimeWindow w;
    check_keys(ctx, obj, path, {"start_local_minutes", "duration_minutes", "repeats_daily"});
    w.start_local_minutes = static_cast<std::uint32_t>(get_u64(ctx, obj, path, "start_local_minutes"));
    w.duration_minutes = static_cast<std::uint32_t>(get_u64(ctx, obj, path, "duration_minutes"));
    w.repeats_daily = get_bool(ctx, obj, path, "repeats_daily", true);
    if (w.start_local_minutes >= 1440) {
        ctx.fail(path + ".start_local_minutes", "must be in [0, 1440)");
    }
    if (w.duration_minutes == 0 || w.duration_minutes > 1440) {
        ctx.fail(path + ".duration_minutes", "must be in (0, 1440]");
    }
    return w;
}

PrimaryUserModel parse_model(Ctx& ctx, const json& obj, const std::string& path) {
    PrimaryUserModel m;
    if (!obj.is_object()) {
        ctx.fail(path, "expected an object");
        return m;
    }
    const std::string kind = get_string(ctx, obj, path, "kind");
    if (kind == "diurnal") {
        m.kind = PrimaryUserModel::Kind::diurnal;
        check_keys(ctx, obj, path, {"kind", "downtime"});
        if (obj.contains("downtime") && obj.at("downtime").is_object()) {
            m.downtime = parse_downtime(ctx, obj.at("downtime"), path + ".downtime");
        } else {
            ctx.fail(path + ".downtime", "missing downtime window");
        }
    } else if (kind == "markov") {
        m.kind = PrimaryUserModel::Kind::markov;
        check_keys(ctx, obj, path, {"kind", "p_on_to_off", "p_off_to_on", "initially_occupied"});
        m.markov.p_on_to_off = get_prob(ctx, obj, path, "p_on_to_off");
        m.markov.p_off_to_on = get_prob(ctx, obj, path, "p_off_to_on");
        m.markov.initially_occupied = get_bool(ctx, obj, path, "initially_occupied", true);
    } else if (!kind.empty()) {
        ctx.fail(path + ".kind", "expected \"diurnal\" or \"markov\"");
    }
    return m;
}

PermissionSet parse_permissions(Ctx& ctx, const json& obj, const std::string& path) {
    PermissionSet p;
    check_keys(ctx, obj, path, {"mode", "allowed"});
    const std::string mode = get_string(ctx, obj, path, "mode");
    if (mode == "open") {
        p.mode = PermissionMode::open_to_all;
        if (obj.contains("allowed")) {
            ctx.fail(path + ".allowed", "not applicable to open permissions");
        }
    } else if (mode == "allow-list") {
        p.mode = PermissionMode::allow_list;
        if (obj.contains("allowed") && obj.at("allowed").is_array()) {
            for (const auto& id : obj.at("allowed")) {
                if (id.is_number_unsigned()) {
                    p.allowed.insert(id.get<NodeId>());
                } else {
                    ctx.fail(path + ".allowed", "entries must be unsigned network ids");
                }
            }
        } else {
            ctx.fail(path + ".allowed", "allow-list permissions need an allowed array");
        }
    } else if (!mode.empty()) {
        ctx.fail(path + ".mode", "expected \"open\" or \"allow-list\"");
    }
    return p;
}

AccessMode parse_mode(Ctx& ctx, const json& obj, const std::string& path, const char* key) {
    const std::string s = get_string(ctx, obj, path, key);
    if (s == "opportunistic") {
        return AccessMode::opportunistic;
    }
    if (s == "dynamic" || s.empty()) {
        return AccessMode::dynamic;
    }
    ctx.fail(path + "." + key, "expected \"opportunistic\" or \"dynamic\"");
    return AccessMode::dynamic;
}

} // namespace

LoadResult parse_scenario(const json& doc) {
    LoadResult result;
    Ctx ctx{result.errors};
    if (!doc.is_object()) {
        ctx.fail("$", "scenario must be a JSON object");
        return result;
    }
    check_keys(ctx, doc, "$",
               {"tick_seconds", "duration_ticks", "global_seed", "crfc_node_id", "regions",
                "networks", "links", "satellites", "scripted_actions"});

    ScenarioConfig cfg;
    cfg.tick_seconds = static_cast<std::uint32_t>(
        get_u64(ctx, doc, "$", "tick_seconds", kDefaultTickSeconds));
    if (cfg.tick_seconds == 0) {
        ctx.fail("$.tick_seconds", "must be positive");
    }
    cfg.duration_ticks = get_u64(ctx, doc, "$", "duration_ticks");
    cfg.global_seed = get_u64(ctx, doc, "$", "global_seed", 0);
    cfg.crfc_node_id = static_cast<NodeId>(get_u64(ctx, doc, "$", "crfc_node_id"));

    if (doc.contains("regions") && doc.at("regions").is_array()) {
        std::size_t i = 0;
        for (const auto& r : doc.at("regions")) {
            const std::string path = "$.regions[" + std::to_string(i++) + "]";
            check_keys(ctx, r, path, {"region_id", "utc_offset_minutes"});
            Region region;
            region.region_id = static_cast<RegionId>(get_u64(ctx, r, path, "region_id"));
            const std::int64_t offset = get_i64(ctx, r, path, "utc_offset_minutes");
            if (offset < kMinUtcOffsetMinutes || offset > kMaxUtcOffsetMinutes) {
                ctx.fail(path + ".utc_offset_minutes", "must be in [-720, 840]");
            }
            region.utc_offset_minutes = static_cast<std::int32_t>(offset);
            cfg.regions.push_back(region);
        }
    } else {
        ctx.fail("$.regions", "missing regions array");
    }

    if (doc.contains("networks") && doc.at("networks").is_array()) {
        std::size_t i = 0;
        for (const auto& n : doc.at("networks")) {
            const std::string path = "$.networks[" + std::to_string(i++) + "]";
            check_keys(ctx, n, path,
                       {"network_id", "region_id", "sensing_interval", "bands", "permissions",
                        "availability", "auto_query"});
            ScenarioNetwork net;
            net.network_id = static_cast<NodeId>(get_u64(ctx, n, path, "network_id"));
            net.region_id = static_cast<RegionId>(get_u64(ctx, n, path, "region_id"));
            net.sensing_interval =
                static_cast<std::uint32_t>(get_u64(ctx, n, path, "sensing_interval", 1));
            if (net.sensing_interval == 0) {
                ctx.fail(path + ".sensing_interval", "must be positive");
            }
            if (n.contains("bands") && n.at("bands").is_array()) {
                std::size_t j = 0;
                for (const auto& b : n.at("bands")) {
                    const std::string bpath = path + ".bands[" + std::to_string(j++) + "]";
                    check_keys(ctx, b, bpath, {"low_hz", "high_hz", "model"});
                    BandConfig bc;
                    bc.band.low_hz = get_u64(ctx, b, bpath, "low_hz");
                    bc.band.high_hz = get_u64(ctx, b, bpath, "high_hz");
                    if (bc.band.low_hz >= bc.band.high_hz) {
                        ctx.fail(bpath, "band must satisfy low_hz < high_hz");
                    }
                    if (b.contains("model")) {
                        bc.model = parse_model(ctx, b.at("model"), bpath + ".model");
                    } else {
                        ctx.fail(bpath + ".model", "missing primary-user model");
                    }
                    net.bands.push_back(bc);
                }
            } else {
                ctx.fail(path + ".bands", "missing bands array");
            }
            if (n.contains("permissions") && n.at("permissions").is_object()) {
                net.permissions = parse_permissions(ctx, n.at("permissions"), path + ".permissions");
            } else {
                ctx.fail(path + ".permissions", "missing permissions object");
            }
            if (n.contains("availability") && n.at("availability").is_object()) {
                const json& a = n.at("availability");
                const std::string apath = path + ".availability";
                check_keys(ctx, a, apath, {"from", "until"});
                net.availability.from.ticks = get_u64(ctx, a, apath, "from");
                net.availability.until.ticks = get_u64(ctx, a, apath, "until");
                if (net.availability.from >= net.availability.until) {
                    ctx.fail(apath, "must satisfy from < until");
                }
            } else {
                ctx.fail(path + ".availability", "missing availability window");
            }
            if (n.contains("auto_query")) {
                const json& q = n.at("auto_query");
                const std::string qpath = path + ".auto_query";
                check_keys(ctx, q, qpath,
                           {"enabled", "mode", "width_hz", "duration_ticks", "min_duration_ticks"});
                net.auto_query.enabled = get_bool(ctx, q, qpath, "enabled", true);
                net.auto_query.mode = parse_mode(ctx, q, qpath, "mode");
                net.auto_query.width_hz = get_u64(ctx, q, qpath, "width_hz");
                net.auto_query.duration_ticks = get_u64(ctx, q, qpath, "duration_ticks", 1);
                net.auto_query.min_duration_ticks =
                    get_u64(ctx, q, qpath, "min_duration_ticks", 1);
                if (net.auto_query.duration_ticks == 0) {
                    ctx.fail(qpath + ".duration_ticks", "must be positive");
                }
                if (net.auto_query.min_duration_ticks == 0) {
                    ctx.fail(qpath + ".min_duration_ticks", "must be positive");
                }
            }
            cfg.networks.push_back(std::move(net));
        }
    } else {
        ctx.fail("$.networks", "missing networks array");
    }

    if (doc.contains("links") && doc.at("links").is_array()) {
        std::size_t i = 0;
        for (const auto& l : doc.at("links")) {
            const std::string path = "$.links[" + std::to_string(i++) + "]";
            check_keys(ctx, l, path,
                       {"link_id", "endpoint_a", "endpoint_b", "delta_ticks", "loss_probability"});
            LinkConfig link;
            link.link_id = static_cast<std::uint32_t>(get_u64(ctx, l, path, "link_id"));
            link.endpoint_a = static_cast<NodeId>(get_u64(ctx, l, path, "endpoint_a"));
            link.endpoint_b = static_cast<NodeId>(get_u64(ctx, l, path, "endpoint_b"));
            link.delta_ticks = get_u64(ctx, l, path, "delta_ticks", 0);
            if (l.contains("loss_probability")) {
                link.loss_probability = get_prob(ctx, l, path, "loss_probability");
                if (link.loss_probability != 0.0) {
                    ctx.fail(path + ".loss_probability", "reserved field; must be 0");
                }
            }
            cfg.links.push_back(link);
        }
    }

    if (doc.contains("satellites") && doc.at("satellites").is_array()) {
        std::size_t i = 0;
        for (const auto& s : doc.at("satellites")) {
            const std::string path = "$.satellites[" + std::to_string(i++) + "]";
            check_keys(ctx, s, path, {"sat_id", "responsible_region", "ring_position"});
            Satellite sat;
            sat.sat_id = static_cast<NodeId>(get_u64(ctx, s, path, "sat_id"));
            sat.responsible_region =
                static_cast<RegionId>(get_u64(ctx, s, path, "responsible_region"));
            sat.ring_position =
                static_cast<std::uint32_t>(get_u64(ctx, s, path, "ring_position"));
            cfg.satellites.push_back(sat);
        }
    }

    if (doc.contains("scripted_actions") && doc.at("scripted_actions").is_array()) {
        std::size_t i = 0;
        for (const auto& a : doc.at("scripted_actions")) {
            const std::string path = "$.scripted_actions[" + std::to_string(i++) + "]";
            ScriptedAction action;
            action.at.ticks = get_u64(ctx, a, path, "at");
            const std::string kind = get_string(ctx, a, path, "action");
            if (kind == "primary-return") {
                check_keys(ctx, a, path, {"at", "action", "network_id", "band"});
                action.kind = ScriptedAction::Kind::primary_return;
                action.network_id = static_cast<NodeId>(get_u64(ctx, a, path, "network_id"));
                if (a.contains("band")) {
                    action.band = parse_band(ctx, a.at("band"), path + ".band");
                } else {
                    ctx.fail(path + ".band", "missing band");
                }
            } else if (kind == "query") {
                check_keys(ctx, a, path,
                           {"at", "action", "network_id", "width_hz", "duration_ticks",
                            "min_duration_ticks", "mode"});
                action.kind = ScriptedAction::Kind::query;
                action.network_id = static_cast<NodeId>(get_u64(ctx, a, path, "network_id"));
                action.query.requester = action.network_id;
                action.query.needed_width_hz = get_u64(ctx, a, path, "width_hz");
                action.query.duration_ticks = get_u64(ctx, a, path, "duration_ticks", 1);
                action.query.min_duration_ticks = get_u64(ctx, a, path, "min_duration_ticks", 1);
                action.query.mode = parse_mode(ctx, a, path, "mode");
                if (action.query.duration_ticks == 0) {
                    ctx.fail(path + ".duration_ticks", "must be positive");
                }
                if (action.query.min_duration_ticks == 0) {
                    ctx.fail(path + ".min_duration_ticks", "must be positive");
                }
            } else if (kind == "cascade-reversal") {
                check_keys(ctx, a, path, {"at", "action"});
                action.kind = ScriptedAction::Kind::cascade_reversal;
            } else if (!kind.empty()) {
                ctx.fail(path + ".action",
                         "expected \"primary-return\", \"query\" or \"cascade-reversal\"");
            }
            cfg.scripted_actions.push_back(std::move(action));
        }
    }

    if (!result.errors.empty()) {
        return result;
    }
    auto more = validate_scenario(cfg);
    result.errors.insert(result.errors.end(), more.begin(), more.end());
    if (result.errors.empty()) {
        result.config = std::move(cfg);
    }
    return result;
}

LoadResult load_scenario(const std::filesystem::path& path) {
    LoadResult result;
    std::ifstream in(path);
    if (!in.is_open()) {
        result.errors.push_back("cannot open scenario file: " + path.string());
        return result;
    }
    json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) {
        result.errors.push_back("scenario is not valid JSON: " + path.string());
        return result;
    }
    return parse_scenario(doc);
}

std::vector<std::string> validate_scenario(const ScenarioConfig& cfg) {
    std::vector<std::string> errors;
    auto fail = [&](const std::string& path, const std::string& why) {
        errors.push_back(path + ": " + why);
    };

    std::set<RegionId> regions;
    for (std::size_t i = 0; i < cfg.regions.size(); ++i) {
        if (!regions.insert(cfg.regions[i].region_id).second) {
            fail("$.regions[" + std::to_string(i) + "]", "duplicate region_id");
        }
    }

    std::set<NodeId> node_ids{cfg.crfc_node_id};
    std::set<NodeId> network_ids;
    for (std::size_t i = 0; i < cfg.networks.size(); ++i) {
        const auto& n = cfg.networks[i];
        const std::string path = "$.networks[" + std::to_string(i) + "]";
        if (!node_ids.insert(n.network_id).second) {
            fail(path, "network_id collides with another node id");
        }
        network_ids.insert(n.network_id);
        if (regions.count(n.region_id) == 0) {
            fail(path + ".region_id", "references an unknown region");
        }
        for (std::size_t a = 0; a < n.bands.size(); ++a) {
            for (std::size_t b = a + 1; b < n.bands.size(); ++b) {
                if (bands_overlap(n.bands[a].band, n.bands[b].band)) {
                    fail(path + ".bands", "bands " + std::to_string(a) + " and " +
                                              std::to_string(b) +
                                              " overlap; a network's occupied and idle "
                                              "declarations must be disjoint");
                }
            }
        }
        if (n.auto_query.enabled && n.auto_query.width_hz == 0) {
            fail(path + ".auto_query.width_hz", "must be positive when enabled");
        }
    }
    for (std::size_t i = 0; i < cfg.networks.size(); ++i) {
        const auto& n = cfg.networks[i];
        for (NodeId allowed : n.permissions.allowed) {
            if (network_ids.count(allowed) == 0) {
                fail("$.networks[" + std::to_string(i) + "].permissions.allowed",
                     "id " + std::to_string(allowed) + " is not a known network");
            }
        }
    }

    std::set<NodeId> sat_ids;
    std::set<RegionId> sat_regions;
    std::set<std::uint32_t> positions;
    for (std::size_t i = 0; i < cfg.satellites.size(); ++i) {
        const auto& s = cfg.satellites[i];
        const std::string path = "$.satellites[" + std::to_string(i) + "]";
        if (!node_ids.insert(s.sat_id).second) {
            fail(path, "sat_id collides with another node id");
        }
        sat_ids.insert(s.sat_id);
        if (regions.count(s.responsible_region) == 0) {
            fail(path + ".responsible_region", "references an unknown region");
        }
        if (!sat_regions.insert(s.responsible_region).second) {
            fail(path + ".responsible_region", "two satellites share a region");
        }
        if (s.ring_position >= cfg.satellites.size() || !positions.insert(s.ring_position).second) {
            fail(path + ".ring_position", "ring positions must be a permutation 0..N-1");
        }
    }

    std::set<std::uint32_t> link_ids;
    for (std::size_t i = 0; i < cfg.links.size(); ++i) {
        const auto& l = cfg.links[i];
        const std::string path = "$.links[" + std::to_string(i) + "]";
        if (!link_ids.insert(l.link_id).second) {
            fail(path + ".link_id", "duplicate link_id");
        }
        if (l.endpoint_a == l.endpoint_b) {
            fail(path, "link endpoints must be distinct");
        }
        for (NodeId endpoint : {l.endpoint_a, l.endpoint_b}) {
            if (node_ids.count(endpoint) == 0) {
                fail(path, "endpoint " + std::to_string(endpoint) + " is not a known node");
            }
        }
    }

    for (std::size_t i = 0; i < cfg.scripted_actions.size(); ++i) {
        const auto& a = cfg.scripted_actions[i];
        const std::string path = "$.scripted_actions[" + std::to_string(i) + "]";
        switch (a.kind) {
        case ScriptedAction::Kind::primary_return: {
            if (network_ids.count(a.network_id) == 0) {
                fail(path + ".network_id", "not a known network");
                break;
            }
            bool found = false;
            for (const auto& n : cfg.networks) {
                if (n.network_id != a.network_id) {
                    continue;
                }
                for (const auto& b : n.bands) {
                    if (b.band == a.band) {
                        found = true;
                    }
                }
            }
            if (!found) {
                fail(path + ".band", "band does not belong to the named network");
            }
            break;
        }
        case ScriptedAction::Kind::query:
            if (network_ids.count(a.network_id) == 0) {
                fail(path + ".network_id", "not a known network");
            }
            if (a.query.needed_width_hz == 0) {
                fail(path + ".width_hz", "must be positive");
            }
            break;
        case ScriptedAction::Kind::cascade_reversal:
            if (cfg.satellites.empty()) {
                fail(path, "cascade-reversal requires a satellite constellation");
            }
            break;
        }
    }

    return errors;
}

} // namespace gcrs
