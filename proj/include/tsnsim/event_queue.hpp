#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "tsnsim/error.hpp"
#include "tsnsim/time.hpp"

namespace tsnsim {

template <typename Payload>
struct Event {
    SimTime at;
    std::uint64_t seq = 0; // global scheduling order, breaks same-time ties
    Payload payload;
};

/// True-time-ordered event queue. Events at equal times pop in the order
/// they were scheduled, so a run's event order is a pure function of the
/// scheduling sequence and nothing else.
template <typename Payload>
class EventQueue {
public:
    SimTime now() const { return now_; }
    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

    std::uint64_t schedule(SimTime at, Payload payload)
    {
        if (at < now_)
            throw ContractError("event scheduled in the past");
        std::uint64_t seq = next_seq_++;
        heap_.push(Event<Payload>{at, seq, std::move(payload)});
        return seq;
    }

    std::optional<Event<Payload>> pop()
    {
        if (heap_.empty()) return std::nullopt;
        Event<Payload> ev = heap_.top();
        heap_.pop();
        now_ = ev.at;
        return ev;
    }

private:
    struct Later {
        bool operator()(const Event<Payload>& a, const Event<Payload>& b) const
        {
            if (a.at != b.at) return b.at < a.at;
            return b.seq < a.seq;
        }
    };

    SimTime now_{0};
    std::uint64_t next_seq_ = 0;
    std::priority_queue<Event<Payload>, std::vector<Event<Payload>>, Later> heap_;
};

} // namespace tsnsim
