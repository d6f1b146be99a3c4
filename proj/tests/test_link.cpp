#include <doctest.h>

#include <stdexcept>

#include "gcrs/link.hpp"
#include "gcrs/rng.hpp"

using namespace gcrs;

namespace {

WireMessage probe_between(NodeId src, NodeId dst, std::uint32_t seq, std::uint64_t now) {
    WireMessage m;
    m.src = src;
    m.dst = dst;
    m.seq = seq;
    m.sent_at = UtcTime{now};
    m.payload = ProbeRequestPayload{seq, 100, 1};
    return m;
}

} // namespace

TEST_CASE("zero-delay links deliver in the same tick") {
    Link link({1, 10, 20, 0});
    CHECK(link.transmit(probe_between(10, 20, 0, 5), UtcTime{5}) == UtcTime{5});
    auto d = link.pop_next(UtcTime{5});
    REQUIRE(d.has_value());
    CHECK(d->to == 20);
    CHECK(d->delivered_at == UtcTime{5});
}

TEST_CASE("delivery happens exactly delta ticks after the send") {
    Link link({1, 10, 20, 10});
    CHECK(link.transmit(probe_between(10, 20, 0, 5), UtcTime{5}) == UtcTime{15});
    CHECK(link.transmit(probe_between(10, 20, 1, 6), UtcTime{6}) == UtcTime{16});

    CHECK_FALSE(link.pop_next(UtcTime{14}).has_value());
    auto first = link.pop_next(UtcTime{15});
    REQUIRE(first.has_value());
    CHECK(first->delivered_at == UtcTime{15});
    CHECK_FALSE(link.pop_next(UtcTime{15}).has_value()); // second not due yet
    auto second = link.pop_next(UtcTime{16});
    REQUIRE(second.has_value());
    CHECK(second->delivered_at == UtcTime{16});
}

TEST_CASE("a frame crosses the link bit-exact") {
    Link link({1, 10, 20, 3});
    const WireMessage m = probe_between(10, 20, 7, 2);
    link.transmit(m, UtcTime{2});
    auto d = link.pop_next(UtcTime{5});
    REQUIRE(d.has_value());
    const auto decoded = decode_frame(d->frame);
    REQUIRE(std::holds_alternative<WireMessage>(decoded));
    CHECK(std::get<WireMessage>(decoded) == m);
}

TEST_CASE("endpoint mismatch is a routing error") {
    Link link({1, 10, 20, 1});
    CHECK_THROWS_AS(link.transmit(probe_between(10, 99, 0, 0), UtcTime{0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(link.transmit(probe_between(99, 20, 0, 0), UtcTime{0}),
                    std::invalid_argument);
    // Either direction between the endpoints is fine.
    CHECK_NOTHROW(link.transmit(probe_between(20, 10, 0, 0), UtcTime{0}));
}

TEST_CASE("per-link FIFO: send order is delivery order, equal stamps included") {
    Link link({1, 10, 20, 4});
    DeterministicRng rng(0xF1F0);
    std::uint64_t now = 0;
    std::vector<std::uint32_t> sent;
    for (std::uint32_t i = 0; i < 200; ++i) {
        now += rng.next_u64() % 2; // frequently the same tick
        link.transmit(probe_between(10, 20, i, now), UtcTime{now});
        sent.push_back(i);
    }
    std::vector<std::uint32_t> delivered;
    std::uint64_t last_at = 0;
    while (auto d = link.pop_next(UtcTime{now + 100})) {
        CHECK(d->delivered_at.ticks >= last_at);
        last_at = d->delivered_at.ticks;
        const auto decoded = decode_frame(d->frame);
        delivered.push_back(std::get<WireMessage>(decoded).seq);
    }
    CHECK(delivered == sent);
}
