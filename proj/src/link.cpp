#include "gcrs/link.hpp"

#include <stdexcept>

namespace gcrs {

UtcTime Link::transmit(const WireMessage& m, UtcTime now) {
    if (!connects(m.src, m.dst)) {
        throw std::invalid_argument("message endpoints do not match link endpoints");
    }
    const UtcTime deliver_at{now.ticks + config_.delta_ticks};
    queue_.push_back({deliver_at, m.dst, encode_frame(m)});
    return deliver_at;
}

std::optional<Delivered> Link::pop_next(UtcTime now) {
    if (queue_.empty() || queue_.front().deliver_at > now) {
        return std::nullopt;
    }
    Pending p = std::move(queue_.front());
    queue_.pop_front();
    return Delivered{p.to, std::move(p.frame), p.deliver_at};
}

} // namespace gcrs
