#pragma once

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <vector>

#include "primesim/types.hpp"

namespace primesim {

enum class EventKind : std::uint8_t { Wakeup, SessionEnd };

struct Event {
  SimTime time = 0;
  std::uint64_t seq = 0;
  AgentId agent{};
  EventKind kind = EventKind::Wakeup;

  friend bool operator==(const Event&, const Event&) = default;
};

// Dispatch order: by time, then by insertion sequence.
class EventQueue {
 public:
  SimTime now() const { return now_; }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const Event& top() const { return heap_.top(); }

  // Throws std::invalid_argument for events dated before now().
  const Event& schedule(SimTime time, AgentId agent, EventKind kind = EventKind::Wakeup) {
    if (time < now_) throw std::invalid_argument("EventQueue::schedule: event is in the past");
    heap_.push(Event{time, next_seq_++, agent, kind});
    last_ = Event{time, next_seq_ - 1, agent, kind};
    return last_;
  }

  // Removes the next event and advances the clock to its time.
  Event pop() {
    Event e = heap_.top();
    heap_.pop();
    now_ = e.time;
    return e;
  }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_seq_ = 0;
  SimTime now_ = 0;
  Event last_{};
};

}  // namespace primesim
