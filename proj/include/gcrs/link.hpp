#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "gcrs/time.hpp"
#include "gcrs/uclt.hpp"
#include "gcrs/wire.hpp"

namespace gcrs {

/// One long-distance link (terrestrial or satellite — they differ only in
/// delay). loss_probability is a reserved hook and must be 0.
struct LinkConfig {
    std::uint32_t link_id{0};
    NodeId endpoint_a{0};
    NodeId endpoint_b{0};
    std::uint64_t delta_ticks{0}; // one-way propagation delay
    double loss_probability{0.0}; // reserved; rejected if nonzero
};

struct Delivered {
    NodeId to{0};
    std::vector<std::uint8_t> frame;
    UtcTime delivered_at{};
};

/// Frames cross the gateway boundary here: transmit encodes, the receiver
/// decodes what pop yields. Deliveries are FIFO; with a constant delay the
/// send order is the delivery order even at equal timestamps.
class Link {
  public:
    explicit Link(LinkConfig config) : config_(config) {}

    const LinkConfig& config() const { return config_; }

    bool connects(NodeId a, NodeId b) const {
        return (config_.endpoint_a == a && config_.endpoint_b == b) ||
               (config_.endpoint_a == b && config_.endpoint_b == a);
    }

    /// Encodes and schedules delivery at now + delta_ticks. Throws
    /// std::invalid_argument if (src, dst) are not this link's endpoints.
    UtcTime transmit(const WireMessage& m, UtcTime now);

    /// Pops the oldest pending delivery if due at `now`.
    std::optional<Delivered> pop_next(UtcTime now);

    std::size_t pending() const { return queue_.size(); }

  private:
    struct Pending {
        UtcTime deliver_at{};
        NodeId to{0};
        std::vector<std::uint8_t> frame;
    };

    LinkConfig config_;
    std::deque<Pending> queue_;
};

} // namespace gcrs
