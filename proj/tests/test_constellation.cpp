#include <doctest.h>

#include <map>
#include <stdexcept>

#include "gcrs/constellation.hpp"

using namespace gcrs;

namespace {

/// sats[i] sits at ring position i; sat k covers region 100 + k.
Constellation make_ring(const std::vector<NodeId>& sats) {
    std::vector<Satellite> v;
    for (std::size_t i = 0; i < sats.size(); ++i) {
        v.push_back({sats[i], 100 + sats[i], static_cast<std::uint32_t>(i)});
    }
    return Constellation(v);
}

/// Brute force: walk the ring both ways, keep the shorter path; on equal
/// length keep the descending-position walk.
std::vector<NodeId> chain_oracle(const std::vector<NodeId>& ring, NodeId busy, NodeId idle) {
    const int n = static_cast<int>(ring.size());
    int from = -1;
    int to = -1;
    for (int i = 0; i < n; ++i) {
        if (ring[static_cast<std::size_t>(i)] == idle) {
            from = i;
        }
        if (ring[static_cast<std::size_t>(i)] == busy) {
            to = i;
        }
    }
    auto walk = [&](int step) {
        std::vector<NodeId> path;
        for (int pos = from;; pos = (pos + step + n) % n) {
            path.push_back(ring[static_cast<std::size_t>(pos)]);
            if (pos == to) {
                return path;
            }
        }
    };
    const auto up = walk(1);
    const auto down = walk(-1);
    if (up.size() < down.size()) {
        return up;
    }
    return down; // equal lengths fall back to the descending walk
}

} // namespace

TEST_CASE("constellation rejects malformed rings") {
    CHECK_THROWS_AS(Constellation({{1, 101, 0}, {2, 102, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Constellation({{1, 101, 0}, {2, 102, 5}}), std::invalid_argument);
    CHECK_THROWS_AS(Constellation({{1, 101, 0}, {1, 102, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(Constellation({{1, 101, 0}, {2, 101, 1}}), std::invalid_argument);
}

TEST_CASE("handover chain on the three-ring takes the short way") {
    Constellation ring = make_ring({1, 2, 3});
    // Sat 3 and sat 1 are ring-adjacent at N=3: one hop suffices.
    CHECK(ring.compute_handover_chain(1, 3).sats == std::vector<NodeId>{3, 1});
    CHECK(ring.compute_handover_chain(1, 2).sats == std::vector<NodeId>{2, 1});
    CHECK(ring.compute_handover_chain(3, 2).sats == std::vector<NodeId>{2, 3});
}

TEST_CASE("handover chain on a pair") {
    Constellation ring = make_ring({1, 2});
    CHECK(ring.compute_handover_chain(1, 2).sats == std::vector<NodeId>{2, 1});
    CHECK(ring.compute_handover_chain(2, 1).sats == std::vector<NodeId>{1, 2});
}

TEST_CASE("equal-length directions break toward descending ring position") {
    Constellation ring = make_ring({1, 2, 3, 4, 5, 6});
    CHECK(ring.compute_handover_chain(1, 4).sats == std::vector<NodeId>{4, 3, 2, 1});
}

TEST_CASE("degenerate chain requests are rejected") {
    Constellation ring = make_ring({1, 2, 3});
    CHECK_THROWS_AS(ring.compute_handover_chain(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(ring.compute_handover_chain(1, 9), std::invalid_argument);
}

TEST_CASE("chains match the brute-force oracle for all pairs, N = 2..8") {
    for (int n = 2; n <= 8; ++n) {
        std::vector<NodeId> ids;
        for (int i = 1; i <= n; ++i) {
            ids.push_back(static_cast<NodeId>(i));
        }
        Constellation ring = make_ring(ids);
        for (NodeId busy : ids) {
            for (NodeId idle : ids) {
                if (busy == idle) {
                    continue;
                }
                const auto got = ring.compute_handover_chain(busy, idle).sats;
                const auto want = chain_oracle(ids, busy, idle);
                CHECK(got == want);
                CHECK(got.front() == idle);
                CHECK(got.back() == busy);
                CHECK(got.size() >= 2);
            }
        }
    }
}

TEST_CASE("cascade shifts duties down the chain and frees the busy satellite") {
    Constellation ring = make_ring({1, 2, 3});
    const NodeId ground = 50;
    const HandOverChain chain{{3, 2, 1}}; // valid chain, even if not shortest
    const auto directives = ring.execute_cascade(chain, ground, UtcTime{10});

    REQUIRE(directives.size() == 3); // one per duty transfer
    CHECK(directives[0] == HandOverDirectivePayload{3, ground, 103, 10});
    CHECK(directives[1] == HandOverDirectivePayload{2, 3, 102, 10});
    CHECK(directives[2] == HandOverDirectivePayload{1, 2, 101, 10});

    CHECK(ring.responsible_for(103) == ground);
    CHECK(ring.responsible_for(102) == NodeId{3});
    CHECK(ring.responsible_for(101) == NodeId{2});
    CHECK(ring.is_free(1));
    CHECK(ring.attached_region(1) == RegionId{101}); // extra capacity for the busy region
    CHECK(ring.responsibility().total_and_injective(ring.regions()));
}

TEST_CASE("minimal cascade on a two-ring") {
    Constellation ring = make_ring({1, 2});
    const auto directives = ring.execute_cascade(HandOverChain{{2, 1}}, 50, UtcTime{0});
    REQUIRE(directives.size() == 2);
    CHECK(ring.is_free(1));
    CHECK(ring.responsible_for(102) == NodeId{50});
    CHECK(ring.responsible_for(101) == NodeId{2});
    CHECK(ring.responsibility().total_and_injective(ring.regions()));
}

TEST_CASE("invalid chains are rejected and leave the constellation untouched") {
    Constellation ring = make_ring({1, 2, 3, 4});
    const auto before = ring.responsibility().assignment();
    CHECK_THROWS_AS(ring.execute_cascade(HandOverChain{{4, 2}}, 50, UtcTime{0}),
                    std::invalid_argument); // not ring-adjacent
    CHECK_THROWS_AS(ring.execute_cascade(HandOverChain{{3}}, 50, UtcTime{0}),
                    std::invalid_argument); // too short
    CHECK_THROWS_AS(ring.execute_cascade(HandOverChain{{2, 3, 2}}, 50, UtcTime{0}),
                    std::invalid_argument); // repeats
    CHECK(ring.responsibility().assignment() == before);
}

TEST_CASE("two cascades then reversal restore the original permutation") {
    Constellation ring = make_ring({1, 2, 3, 4});
    const auto baseline = ring.responsibility().assignment();

    ring.execute_cascade(ring.compute_handover_chain(1, 3), 50, UtcTime{5});
    CHECK(ring.is_free(1));
    // Second cascade along the still-dutied side of the ring.
    ring.execute_cascade(ring.compute_handover_chain(4, 3), 60, UtcTime{6});
    CHECK(ring.is_free(4));
    CHECK(ring.responsibility().total_and_injective(ring.regions()));

    // Permutation-composition oracle: applying the reversal directives one
    // by one must land exactly on the baseline, injective at every step.
    std::map<RegionId, NodeId> replay = ring.responsibility().assignment();
    for (const auto& d : ring.compute_reversal_directives(UtcTime{7})) {
        replay[d.region] = d.to_entity;
        std::map<NodeId, int> holders;
        for (const auto& [r, e] : replay) {
            holders[e]++;
            CHECK(holders[e] == 1);
        }
        ring.apply_directive(d);
        CHECK(ring.responsibility().total_and_injective(ring.regions()));
    }
    CHECK(ring.responsibility().assignment() == baseline);
    CHECK(replay == baseline);
    CHECK_FALSE(ring.is_free(1));
    CHECK_FALSE(ring.is_free(4));
}

TEST_CASE("query sequence: three satellites, one idle region") {
    Constellation ring = make_ring({1, 2, 3});
    const NodeId crfc = 99;
    const NodeId busy_network = 11;
    SpectrumQuery q{busy_network, 100, 1, 600, AccessMode::dynamic};
    const std::vector<RegionStatus> statuses = {
        {101, 11, false, {}},
        {102, 12, false, {}},
        {103, 13, true, {{1000, 2000}}},
    };
    const auto result = run_query_sequence(ring, crfc, busy_network, 101, q, statuses,
                                           UtcTime{20});
    CHECK(result.chosen_region == RegionId{103});
    CHECK_FALSE(result.failed_at_step.has_value());

    std::vector<MessageKind> kinds;
    for (const auto& m : result.trace) {
        kinds.push_back(m.kind());
    }
    const std::vector<MessageKind> want = {
        MessageKind::spectrum_query,  MessageKind::spectrum_query,
        MessageKind::probe_request,   MessageKind::probe_request,
        MessageKind::probe_request,   MessageKind::probe_request,
        MessageKind::probe_request,   MessageKind::probe_request,
        MessageKind::status_report,   MessageKind::status_report,
        MessageKind::status_report,   MessageKind::status_report,
        MessageKind::status_report,   MessageKind::status_report,
        MessageKind::spectrum_response, MessageKind::spectrum_response,
    };
    CHECK(kinds == want);

    // Step 1 and step 8 terminate at the busy network.
    CHECK(result.trace.front().src == busy_network);
    CHECK(result.trace.front().dst == NodeId{1});
    CHECK(result.trace.back().src == NodeId{1});
    CHECK(result.trace.back().dst == busy_network);

    const auto& response = std::get<SpectrumResponsePayload>(result.trace.back().payload);
    CHECK(response.status == QueryStatus::region_available);
    CHECK(response.region == RegionId{103});
    CHECK(response.region_idle_bands == std::vector<FrequencyBand>{{1000, 2000}});
}

TEST_CASE("query sequence with nobody idle chooses none, same shape") {
    Constellation ring = make_ring({1, 2, 3});
    SpectrumQuery q{11, 100, 1, 600, AccessMode::dynamic};
    const std::vector<RegionStatus> statuses = {
        {101, 11, false, {}}, {102, 12, false, {}}, {103, 13, false, {}}};
    const auto result = run_query_sequence(ring, 99, 11, 101, q, statuses, UtcTime{0});
    CHECK_FALSE(result.chosen_region.has_value());
    CHECK(result.trace.size() == 2 + 2 * 3 + 2 * 3 + 2);
    const auto& response = std::get<SpectrumResponsePayload>(result.trace.back().payload);
    CHECK(response.status == QueryStatus::no_spectrum);
}

TEST_CASE("query sequence excludes the asking region even when idle") {
    Constellation ring = make_ring({1});
    SpectrumQuery q{11, 100, 1, 600, AccessMode::dynamic};
    const std::vector<RegionStatus> statuses = {{101, 11, true, {{10, 20}}}};
    const auto result = run_query_sequence(ring, 99, 11, 101, q, statuses, UtcTime{0});
    CHECK_FALSE(result.chosen_region.has_value());
    CHECK(result.trace.size() == 2 + 2 + 2 + 2);
}

TEST_CASE("query sequence message count is 2 + 2N + 2N + 2") {
    for (std::size_t n = 1; n <= 6; ++n) {
        std::vector<NodeId> ids;
        std::vector<RegionStatus> statuses;
        for (std::size_t i = 1; i <= n; ++i) {
            ids.push_back(static_cast<NodeId>(i));
            statuses.push_back({static_cast<RegionId>(100 + i),
                                static_cast<NodeId>(10 + i), i % 2 == 0, {}});
        }
        Constellation ring = make_ring(ids);
        SpectrumQuery q{11, 100, 1, 600, AccessMode::dynamic};
        const auto result = run_query_sequence(ring, 99, 11, 101, q, statuses, UtcTime{0});
        CHECK(result.trace.size() == 2 + 2 * n + 2 * n + 2);
    }
}

TEST_CASE("query sequence fails at step one without a responsible satellite") {
    Constellation ring = make_ring({1, 2});
    // Hand both duties elsewhere so region 101 has a ground responsible.
    ring.execute_cascade(HandOverChain{{2, 1}}, 50, UtcTime{0});
    SpectrumQuery q{11, 100, 1, 600, AccessMode::dynamic};
    // Region 102 is now covered by ground network 50, not a satellite;
    // still fine. Region 999 has nobody.
    const auto result = run_query_sequence(ring, 99, 11, 999, q, {}, UtcTime{0});
    CHECK(result.failed_at_step == 1);
    CHECK(result.trace.empty());
}
