#include "gcrs/sim.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

#include "gcrs/constellation.hpp"
#include "gcrs/crfc.hpp"
#include "gcrs/link.hpp"
#include "gcrs/network.hpp"
#include "gcrs/rng.hpp"
#include "gcrs/wire.hpp"

namespace gcrs {

namespace {

enum class EventKind : std::uint8_t {
    deliver_message,
    advance_occupancy,
    sense,
    scripted_action,
    expire_leases,
    start_cascade, // deferred until the step-8 response has landed
};

struct Event {
    UtcTime at{};
    std::uint64_t seq{0};
    EventKind kind{EventKind::advance_occupancy};
    NodeId target{0};
    std::size_t link_index{0};   // deliver_message
    std::size_t action_index{0}; // scripted_action
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.at != b.at) {
            return a.at > b.at;
        }
        return a.seq > b.seq;
    }
};

class Engine {
  public:
    Engine(const ScenarioConfig& cfg, std::uint64_t seed)
        : cfg_(cfg), seed_(seed), crfc_(cfg.crfc_node_id) {
        for (const auto& l : cfg.links) {
            links_.emplace_back(l);
        }
        for (const auto& n : cfg.networks) {
            NetworkConfig nc;
            nc.network_id = n.network_id;
            nc.region = region_by_id(n.region_id);
            nc.sensing_interval = n.sensing_interval;
            nc.bands = n.bands;
            nc.permissions = n.permissions;
            nc.availability = n.availability;
            networks_.emplace(n.network_id,
                              RegionalNetwork(std::move(nc),
                                              derive_stream_seed(seed, n.network_id),
                                              cfg.tick_seconds));
            policies_[n.network_id] = n.auto_query;
            crfc_.register_network(n.network_id, n.region_id);
        }
        if (!cfg.satellites.empty()) {
            constellation_.emplace(cfg.satellites);
        }
    }

    SimResult run() {
        TraceHeader header{seed_, cfg_.tick_seconds, cfg_.duration_ticks};
        lines_.push_back(render_trace_header(header));

        for (std::size_t i = 0; i < cfg_.scripted_actions.size(); ++i) {
            if (cfg_.scripted_actions[i].at.ticks < cfg_.duration_ticks) {
                push_event({cfg_.scripted_actions[i].at, 0, EventKind::scripted_action, 0, 0, i});
            }
        }
        if (cfg_.duration_ticks > 0) {
            for (const auto& [id, net] : networks_) {
                push_event({UtcTime{0}, 0, EventKind::advance_occupancy, id});
            }
            for (const auto& [id, net] : networks_) {
                push_event({UtcTime{0}, 0, EventKind::sense, id});
            }
        }

        while (!queue_.empty()) {
            const Event ev = queue_.top();
            queue_.pop();
            if (ev.at.ticks >= cfg_.duration_ticks) {
                continue;
            }
            now_ = ev.at;
            ++events_processed_;
            dispatch(ev);
#ifndef NDEBUG
            check_invariants();
#endif
        }
        check_invariants();

        SimResult result;
        result.trace_lines = std::move(lines_);
        result.events = std::move(events_);
        result.metrics = compute_metrics(result.events, cfg_);
        return result;
    }

  private:
    // ---- plumbing ----

    Region region_by_id(RegionId id) const {
        for (const auto& r : cfg_.regions) {
            if (r.region_id == id) {
                return r;
            }
        }
        return Region{id, 0};
    }

    void push_event(Event ev) {
        ev.seq = next_event_seq_++;
        queue_.push(ev);
    }

    void emit(TraceEvent ev) {
        ev.tick = now_.ticks;
        ev.seq = next_line_seq_++;
        lines_.push_back(render_trace_line(ev));
        events_.push_back(std::move(ev));
    }

    void emit_message_event(const char* kind, const WireMessage& m) {
        TraceEvent ev;
        ev.kind = kind;
        ev.src = m.src;
        ev.dst = m.dst;
        ev.detail = summarize_payload(m);
        emit(std::move(ev));
    }

    /// Lowest-link_id link joining a and b, if any.
    Link* direct_link(NodeId a, NodeId b) {
        Link* best = nullptr;
        for (auto& l : links_) {
            if (l.connects(a, b) &&
                (best == nullptr || l.config().link_id < best->config().link_id)) {
                best = &l;
            }
        }
        return best;
    }

    void emit_routing_error(NodeId src, NodeId dst, const char* what) {
        TraceEvent ev;
        ev.kind = "routing-error";
        ev.src = src;
        ev.dst = dst;
        ev.detail.emplace_back("msg", quoted_json(what));
        emit(std::move(ev));
    }

    /// Single-hop send over the (src, dst) link. Returns the message seq,
    /// or nullopt on a routing error.
    std::optional<std::uint32_t> send_message(NodeId src, NodeId dst, Payload payload) {
        Link* link = direct_link(src, dst);
        if (link == nullptr) {
            emit_routing_error(src, dst,
                               to_string(static_cast<MessageKind>(payload.index() + 1)));
            return std::nullopt;
        }
        WireMessage m;
        m.src = src;
        m.dst = dst;
        m.seq = next_seq_[{src, dst}]++;
        m.sent_at = now_;
        m.payload = std::move(payload);
        const UtcTime deliver_at = link->transmit(m, now_);
        emit_message_event("send", m);
        const std::size_t link_index = static_cast<std::size_t>(link - links_.data());
        push_event({deliver_at, 0, EventKind::deliver_message, dst, link_index, 0});
        return m.seq;
    }

    /// Home satellite for a network, from the static constellation layout.
    std::optional<NodeId> home_sat_of(NodeId network) const {
        if (!constellation_.has_value()) {
            return std::nullopt;
        }
        auto it = networks_.find(network);
        if (it == networks_.end()) {
            return std::nullopt;
        }
        return constellation_->home_satellite(it->second.config().region.region_id);
    }

    /// Sends toward a network: direct link if present, else one hop via
    /// the network's home satellite (the satellite relays on delivery).
    void send_toward_network(NodeId src, NodeId network, Payload payload) {
        if (direct_link(src, network) != nullptr) {
            send_message(src, network, std::move(payload));
            return;
        }
        const auto sat = home_sat_of(network);
        if (sat.has_value() && direct_link(src, *sat) != nullptr) {
            send_message(src, *sat, std::move(payload));
            return;
        }
        emit_routing_error(src, network,
                           to_string(static_cast<MessageKind>(payload.index() + 1)));
    }

    /// Sends toward the coordinator: direct link or via the home satellite.
    void send_toward_crfc(NodeId network, Payload payload) {
        if (direct_link(network, cfg_.crfc_node_id) != nullptr) {
            send_message(network, cfg_.crfc_node_id, std::move(payload));
            return;
        }
        const auto sat = home_sat_of(network);
        if (sat.has_value() && direct_link(network, *sat) != nullptr) {
            send_message(network, *sat, std::move(payload));
            return;
        }
        emit_routing_error(network, cfg_.crfc_node_id,
                           to_string(static_cast<MessageKind>(payload.index() + 1)));
    }

    void maybe_push_record(NodeId network_id) {
        auto it = networks_.find(network_id);
        if (it == networks_.end()) {
            return;
        }
        NetworkRecord record = it->second.current_record();
        auto last = last_pushed_.find(network_id);
        if (last != last_pushed_.end() && last->second == record) {
            return;
        }
        last_pushed_[network_id] = record;
        send_toward_crfc(network_id, UcltUpdatePayload{std::move(record)});
    }

    void emit_transitions(NodeId network_id, const std::vector<TransitionNotice>& notices) {
        for (const auto& n : notices) {
            TraceEvent ev;
            ev.kind = "transition";
            ev.src = network_id;
            ev.dst = network_id;
            ev.detail.emplace_back("band", quoted_json("[" + std::to_string(n.band.low_hz) + "," +
                                                  std::to_string(n.band.high_hz) + ")"));
            ev.detail.emplace_back("primary", n.primary_present ? "true" : "false");
            emit(std::move(ev));
        }
    }

    // ---- event dispatch ----

    void dispatch(const Event& ev) {
        switch (ev.kind) {
        case EventKind::advance_occupancy: {
            auto& net = networks_.at(ev.target);
            emit_transitions(ev.target, net.advance_occupancy(now_));
            maybe_push_record(ev.target);
            if (now_.ticks + 1 < cfg_.duration_ticks) {
                push_event({UtcTime{now_.ticks + 1}, 0, EventKind::advance_occupancy, ev.target});
            }
            break;
        }
        case EventKind::sense: {
            auto& net = networks_.at(ev.target);
            net.record_sensing(now_);
            run_auto_query(ev.target, net);
            const std::uint64_t interval = net.config().sensing_interval;
            if (now_.ticks + interval < cfg_.duration_ticks) {
                push_event({UtcTime{now_.ticks + interval}, 0, EventKind::sense, ev.target});
            }
            break;
        }
        case EventKind::scripted_action:
            run_scripted(cfg_.scripted_actions[ev.action_index]);
            break;
        case EventKind::expire_leases: {
            for (const auto& rev : crfc_.expire_leases(now_)) {
                send_revocation(rev);
            }
            break;
        }
        case EventKind::start_cascade: {
            const auto& pending = cascades_[ev.action_index];
            start_cascade(pending.first, pending.second);
            break;
        }
        case EventKind::deliver_message: {
            auto delivered = links_[ev.link_index].pop_next(now_);
            assert(delivered.has_value());
            auto decoded = decode_frame(delivered->frame);
            if (std::holds_alternative<DecodeError>(decoded)) {
                TraceEvent err;
                err.kind = "decode-error";
                err.src = 0;
                err.dst = delivered->to;
                err.detail.emplace_back("error",
                                        quoted_json(to_string(std::get<DecodeError>(decoded))));
                emit(std::move(err));
                break;
            }
            const WireMessage& m = std::get<WireMessage>(decoded);
            emit_message_event("deliver", m);
            deliver(m);
            break;
        }
        }
    }

    void run_auto_query(NodeId network_id, RegionalNetwork& net) {
        const AutoQueryPolicy& policy = policies_.at(network_id);
        if (!policy.enabled || in_flight_.count(network_id) > 0) {
            return;
        }
        if (!net.busy_at_last_sensing() || !net.leased_in().empty()) {
            return;
        }
        SpectrumQuery q;
        q.requester = network_id;
        q.needed_width_hz = policy.width_hz;
        q.min_duration_ticks = policy.min_duration_ticks;
        q.duration_ticks = policy.duration_ticks;
        q.mode = policy.mode;
        in_flight_.insert(network_id);
        send_toward_crfc(network_id, q);
    }

    void run_scripted(const ScriptedAction& action) {
        TraceEvent ev;
        ev.kind = "scripted";
        ev.src = action.network_id;
        ev.dst = action.network_id;
        switch (action.kind) {
        case ScriptedAction::Kind::primary_return: {
            ev.detail.emplace_back("action", quoted_json("primary-return"));
            ev.detail.emplace_back("band",
                                   quoted_json("[" + std::to_string(action.band.low_hz) + "," +
                                          std::to_string(action.band.high_hz) + ")"));
            emit(std::move(ev));
            auto& net = networks_.at(action.network_id);
            emit_transitions(action.network_id, net.handle_primary_return(action.band, now_));
            maybe_push_record(action.network_id);
            break;
        }
        case ScriptedAction::Kind::query: {
            ev.detail.emplace_back("action", quoted_json("query"));
            emit(std::move(ev));
            in_flight_.insert(action.network_id);
            send_toward_crfc(action.network_id, action.query);
            break;
        }
        case ScriptedAction::Kind::cascade_reversal: {
            ev.src = cfg_.crfc_node_id;
            ev.dst = cfg_.crfc_node_id;
            ev.detail.emplace_back("action", quoted_json("cascade-reversal"));
            emit(std::move(ev));
            if (!constellation_.has_value()) {
                break;
            }
            for (const auto& d : constellation_->compute_reversal_directives(now_)) {
                send_message(cfg_.crfc_node_id, d.to_entity, d); // target sat applies it
            }
            break;
        }
        }
    }

    // ---- message handling ----

    void deliver(const WireMessage& m) {
        if (m.dst == cfg_.crfc_node_id) {
            crfc_on_message(m);
        } else if (is_satellite(m.dst)) {
            satellite_on_message(m.dst, m);
        } else if (networks_.count(m.dst) > 0) {
            network_on_message(m.dst, m);
        }
    }

    bool is_satellite(NodeId id) const {
        for (const auto& s : cfg_.satellites) {
            if (s.sat_id == id) {
                return true;
            }
        }
        return false;
    }

    void send_revocation(const Revocation& rev) {
        LeaseRevokePayload payload{rev.lease.lease_id, rev.lease.lessor, rev.lease.lessee,
                                   rev.lease.band, rev.reason};
        send_toward_network(cfg_.crfc_node_id, rev.lease.lessee, payload);
    }

    void crfc_on_message(const WireMessage& m) {
        std::visit(
            [&](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, UcltUpdatePayload>) {
                    crfc_on_uclt_update(p);
                } else if constexpr (std::is_same_v<T, SpectrumQuery>) {
                    crfc_on_query(m, p);
                } else if constexpr (std::is_same_v<T, StatusReportPayload>) {
                    crfc_on_status(m, p);
                }
            },
            m.payload);
    }

    void crfc_on_uclt_update(const UcltUpdatePayload& p) {
        std::string why;
        if (!crfc_.uclt().upsert(p.record, &why)) {
            TraceEvent ev;
            ev.kind = "record-rejected";
            ev.src = p.record.network_id;
            ev.dst = cfg_.crfc_node_id;
            ev.detail.emplace_back("error", quoted_json(why));
            emit(std::move(ev));
            return;
        }
        // A band newly occupied by its primary invalidates any lease on it.
        for (const auto& band : p.record.occupied_bands) {
            for (const auto& rev : crfc_.revoke_on_primary_return(p.record.network_id, band, now_)) {
                send_revocation(rev);
            }
        }
    }

    void crfc_on_query(const WireMessage& m, const SpectrumQuery& q) {
        const bool via_satellite = is_satellite(m.src);
        if (constellation_.has_value() && via_satellite) {
            crfc_orchestrate_probe(m, q);
            return;
        }
        const QueryOutcome outcome = crfc_.handle_query(q, now_);
        SpectrumResponsePayload response;
        response.status = outcome.status;
        response.query_ref = m.seq;
        response.lease = outcome.lease;
        send_toward_network(cfg_.crfc_node_id, q.requester, response);
        if (outcome.status == QueryStatus::granted) {
            const Lease& lease = *outcome.lease;
            send_toward_network(cfg_.crfc_node_id, lease.lessor, LeaseGrantPayload{lease});
            if (lease.expires_at.ticks < cfg_.duration_ticks) {
                push_event({lease.expires_at, 0, EventKind::expire_leases, cfg_.crfc_node_id});
            }
        }
    }

    struct PendingProbe {
        NodeId via_sat{0};
        std::uint32_t sat_seq{0};
        SpectrumQuery query;
        RegionId busy_region{0};
        std::set<NodeId> awaiting;
        std::vector<StatusReportPayload> statuses;
    };

    void crfc_orchestrate_probe(const WireMessage& m, const SpectrumQuery& q) {
        const auto requester_region = crfc_.region_of_network(q.requester);
        if (!requester_region.has_value()) {
            SpectrumResponsePayload response;
            response.status = QueryStatus::unknown_requester;
            response.query_ref = m.seq;
            send_message(cfg_.crfc_node_id, m.src, response);
            return;
        }
        const std::uint32_t ref = next_probe_ref_++;
        PendingProbe pending;
        pending.via_sat = m.src;
        pending.sat_seq = m.seq;
        pending.query = q;
        pending.busy_region = *requester_region;

        std::vector<NodeId> duty_sats;
        for (const auto& s : constellation_->satellites()) {
            if (constellation_->responsibility().region_of(s.sat_id).has_value()) {
                duty_sats.push_back(s.sat_id);
            }
        }
        std::sort(duty_sats.begin(), duty_sats.end());
        const ProbeRequestPayload probe{ref, q.needed_width_hz, q.min_duration_ticks};
        for (NodeId sat : duty_sats) {
            if (send_message(cfg_.crfc_node_id, sat, probe).has_value()) {
                pending.awaiting.insert(sat);
            }
        }
        if (pending.awaiting.empty()) {
            SpectrumResponsePayload response;
            response.status = QueryStatus::no_spectrum;
            response.query_ref = pending.sat_seq;
            send_message(cfg_.crfc_node_id, pending.via_sat, response);
            return;
        }
        probes_[ref] = std::move(pending);
    }

    void crfc_on_status(const WireMessage& m, const StatusReportPayload& p) {
        auto it = probes_.find(p.query_ref);
        if (it == probes_.end()) {
            return;
        }
        PendingProbe& pending = it->second;
        pending.awaiting.erase(m.src);
        pending.statuses.push_back(p);
        if (!pending.awaiting.empty()) {
            return;
        }
        // All statuses in: pick the lowest idle region id, self excluded.
        std::optional<RegionId> chosen;
        const StatusReportPayload* chosen_status = nullptr;
        for (const auto& st : pending.statuses) {
            if (!st.idle || st.region == pending.busy_region) {
                continue;
            }
            if (!chosen.has_value() || st.region < *chosen) {
                chosen = st.region;
                chosen_status = &st;
            }
        }
        SpectrumResponsePayload response;
        response.query_ref = pending.sat_seq;
        if (chosen.has_value()) {
            response.status = QueryStatus::region_available;
            response.region = *chosen;
            response.region_idle_bands = chosen_status->idle_bands;
        } else {
            response.status = QueryStatus::no_spectrum;
        }
        send_message(cfg_.crfc_node_id, pending.via_sat, response);

        if (chosen.has_value()) {
            // Step 9 waits for the answer to land at the busy network.
            std::uint64_t defer = 0;
            if (const Link* up = direct_link(cfg_.crfc_node_id, pending.via_sat)) {
                defer += up->config().delta_ticks;
            }
            if (const Link* down = direct_link(pending.via_sat, pending.query.requester)) {
                defer += down->config().delta_ticks;
            }
            const UtcTime when{now_.ticks + defer};
            if (when.ticks < cfg_.duration_ticks) {
                cascades_.emplace_back(pending.busy_region, *chosen);
                push_event({when, 0, EventKind::start_cascade, cfg_.crfc_node_id, 0,
                            cascades_.size() - 1});
            }
        }
        probes_.erase(it);
    }

    void start_cascade(RegionId busy_region, RegionId idle_region) {
        const auto busy_sat = constellation_->responsible_for(busy_region);
        const auto idle_sat = constellation_->responsible_for(idle_region);
        if (!busy_sat.has_value() || !idle_sat.has_value() || *busy_sat == *idle_sat) {
            return;
        }
        if (!is_satellite(*busy_sat) || !is_satellite(*idle_sat)) {
            return; // a ground entity already substitutes here
        }
        // The idle region's ground network absorbs the chain head's duties.
        std::optional<NodeId> ground;
        for (const auto& [id, net] : networks_) {
            if (net.config().region.region_id == idle_region) {
                ground = id;
                break;
            }
        }
        if (!ground.has_value()) {
            return;
        }
        const HandOverChain chain = constellation_->compute_handover_chain(*busy_sat, *idle_sat);
        for (const auto& d : constellation_->plan_cascade(chain, *ground, now_)) {
            // Addressed to the satellite handing the duty over; applied on
            // delivery so a half-applied cascade is never observable.
            send_message(cfg_.crfc_node_id, d.from_entity, d);
        }
    }

    struct PendingRelay {
        NodeId origin_network{0};
        std::uint32_t origin_seq{0};
    };

    struct ProbeCollect {
        std::uint32_t ref{0};
        RegionId region{0};
        std::set<NodeId> awaiting;
        bool idle{false};
        std::vector<FrequencyBand> idle_bands;
    };

    void satellite_on_message(NodeId sat, const WireMessage& m) {
        std::visit(
            [&](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, SpectrumQuery>) {
                    const auto fwd_seq = send_message(sat, cfg_.crfc_node_id, p);
                    if (fwd_seq.has_value()) {
                        relays_[{sat, *fwd_seq}] = {m.src, m.seq};
                    }
                } else if constexpr (std::is_same_v<T, UcltUpdatePayload>) {
                    send_message(sat, cfg_.crfc_node_id, p);
                } else if constexpr (std::is_same_v<T, ProbeRequestPayload>) {
                    satellite_probe_region(sat, p);
                } else if constexpr (std::is_same_v<T, StatusReportPayload>) {
                    satellite_collect_status(sat, m.src, p);
                } else if constexpr (std::is_same_v<T, SpectrumResponsePayload>) {
                    auto it = relays_.find({sat, p.query_ref});
                    if (it == relays_.end()) {
                        emit_routing_error(sat, 0, "SpectrumResponse");
                        return;
                    }
                    SpectrumResponsePayload down = p;
                    down.query_ref = it->second.origin_seq;
                    send_message(sat, it->second.origin_network, down);
                    relays_.erase(it);
                } else if constexpr (std::is_same_v<T, LeaseGrantPayload>) {
                    send_message(sat, p.lease.lessor, p);
                } else if constexpr (std::is_same_v<T, LeaseRevokePayload>) {
                    send_message(sat, p.lessee, p);
                } else if constexpr (std::is_same_v<T, HandOverDirectivePayload>) {
                    constellation_->apply_directive(p);
                }
            },
            m.payload);
    }

    void satellite_probe_region(NodeId sat, const ProbeRequestPayload& p) {
        const auto region = constellation_->responsibility().region_of(sat);
        if (!region.has_value()) {
            // Freed satellite: nothing to probe, report busy.
            StatusReportPayload report{p.query_ref, 0, false, {}};
            send_message(sat, cfg_.crfc_node_id, report);
            return;
        }
        ProbeCollect collect;
        collect.ref = p.query_ref;
        collect.region = *region;
        for (const auto& [id, net] : networks_) {
            if (net.config().region.region_id == *region && direct_link(sat, id) != nullptr) {
                collect.awaiting.insert(id);
            }
        }
        if (collect.awaiting.empty()) {
            StatusReportPayload report{p.query_ref, *region, false, {}};
            send_message(sat, cfg_.crfc_node_id, report);
            return;
        }
        collects_[{sat, p.query_ref}] = collect;
        for (NodeId id : collect.awaiting) {
            send_message(sat, id, p);
        }
    }

    void satellite_collect_status(NodeId sat, NodeId from, const StatusReportPayload& p) {
        auto it = collects_.find({sat, p.query_ref});
        if (it == collects_.end()) {
            return;
        }
        ProbeCollect& collect = it->second;
        collect.awaiting.erase(from);
        if (p.idle && !collect.idle) {
            collect.idle = true;
            collect.idle_bands = p.idle_bands;
        }
        if (!collect.awaiting.empty()) {
            return;
        }
        StatusReportPayload report{collect.ref, collect.region, collect.idle, collect.idle_bands};
        send_message(sat, cfg_.crfc_node_id, report);
        collects_.erase(it);
    }

    void network_on_message(NodeId id, const WireMessage& m) {
        auto& net = networks_.at(id);
        std::visit(
            [&](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, ProbeRequestPayload>) {
                    auto idle = net.idle_bands_for_probe(p.needed_width_hz,
                                                        p.min_duration_ticks, now_);
                    StatusReportPayload report{p.query_ref,
                                               net.config().region.region_id,
                                               !idle.empty(), std::move(idle)};
                    send_message(id, m.src, report);
                } else if constexpr (std::is_same_v<T, SpectrumResponsePayload>) {
                    in_flight_.erase(id);
                    if (p.status == QueryStatus::granted && p.lease.has_value() &&
                        p.lease->lessee == id) {
                        net.add_leased_in({p.lease->lease_id, p.lease->lessor, p.lease->band,
                                           p.lease->expires_at});
                    }
                } else if constexpr (std::is_same_v<T, LeaseGrantPayload>) {
                    if (p.lease.lessor == id) {
                        net.mark_leased_out(p.lease.band, p.lease.expires_at);
                        maybe_push_record(id);
                    }
                } else if constexpr (std::is_same_v<T, LeaseRevokePayload>) {
                    net.remove_leased_in(p.lease_id);
                }
            },
            m.payload);
    }

    // ---- invariants ----

    void check_invariants() {
        auto violation = [&](const std::string& what) {
            throw std::logic_error("invariant violated after event #" +
                                   std::to_string(events_processed_) + ": " + what);
        };
        if (!crfc_.lease_table_valid()) {
            violation("lease table exclusivity");
        }
        if (constellation_.has_value() &&
            !constellation_->responsibility().total_and_injective(constellation_->regions())) {
            violation("responsibility map totality/injectivity");
        }
        for (const auto& [id, net] : networks_) {
            for (const auto& bc : net.config().bands) {
                const auto expiry = net.leased_out_expiry(bc.band);
                if (!expiry.has_value() || expiry->ticks <= now_.ticks) {
                    continue; // release pending at this tick is fine
                }
                bool backed = false;
                for (const auto& lease : crfc_.active_leases()) {
                    if (lease.lessor == id && lease.band == bc.band) {
                        backed = true;
                    }
                }
                if (!backed) {
                    violation("leased-out band without a coordinator lease");
                }
            }
        }
    }

    const ScenarioConfig& cfg_;
    std::uint64_t seed_;
    UtcTime now_{};
    std::uint64_t next_event_seq_{0};
    std::uint64_t next_line_seq_{0};
    std::uint64_t events_processed_{0};

    Crfc crfc_;
    std::map<NodeId, RegionalNetwork> networks_;
    std::map<NodeId, AutoQueryPolicy> policies_;
    std::optional<Constellation> constellation_;
    std::vector<Link> links_;

    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    std::map<std::pair<NodeId, NodeId>, std::uint32_t> next_seq_;
    std::map<NodeId, NetworkRecord> last_pushed_;
    std::set<NodeId> in_flight_;
    std::uint32_t next_probe_ref_{0};
    std::map<std::uint32_t, PendingProbe> probes_;
    std::map<std::pair<NodeId, std::uint32_t>, PendingRelay> relays_;
    std::map<std::pair<NodeId, std::uint32_t>, ProbeCollect> collects_;
    std::vector<std::pair<RegionId, RegionId>> cascades_; // (busy, idle)

    std::vector<std::string> lines_;
    std::vector<TraceEvent> events_;
};

} // namespace

SimResult run_simulation(const ScenarioConfig& config,
                         std::optional<std::uint64_t> seed_override) {
    const std::uint64_t seed = seed_override.value_or(config.global_seed);
    Engine engine(config, seed);
    return engine.run();
}

} // namespace gcrs
