#pragma once

#include <cstdint>
#include <queue>
#include <vector>

namespace rlab::sim {

/// Time-stamped protocol event. Ties in time break by insertion sequence, so
/// the processing order is a pure function of the enqueue order.
struct SimEvent {
    enum class Type : std::uint8_t {
        link_resolved,    // pulse + classical result round trip finished
        purify_resolved,  // two-way purification result exchange finished
        swap_usable,      // far ends notified, merged pair becomes usable
    };

    double time_ms = 0.0;
    std::uint64_t seq = 0;
    Type type = Type::link_resolved;
    std::int32_t segment = -1;  // link_resolved
    std::int32_t pair_a = -1;   // purify: kept; swap: merged pair
    std::int32_t pair_b = -1;   // purify: sacrificial pair
};

/// Min-heap on (time_ms, seq) with a monotone sequence counter assigned at
/// push, giving deterministic FIFO order among simultaneous events.
class EventQueue {
public:
    void push(SimEvent ev) {
        ev.seq = next_seq_++;
        heap_.push(ev);
    }

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    const SimEvent& top() const { return heap_.top(); }

    SimEvent pop() {
        SimEvent ev = heap_.top();
        heap_.pop();
        return ev;
    }

private:
    struct Later {
        bool operator()(const SimEvent& a, const SimEvent& b) const {
            if (a.time_ms != b.time_ms) return a.time_ms > b.time_ms;
            return a.seq > b.seq;
        }
    };

    std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
    std::uint64_t next_seq_ = 0;
};

}  // namespace rlab::sim
