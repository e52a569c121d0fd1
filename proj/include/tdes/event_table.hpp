#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace tdes {

using EventId = std::int32_t;
using StateId = std::int32_t;

inline constexpr EventId kNoEvent = -1;
inline constexpr StateId kNoState = -1;

/// Upper-bound sentinel for remote events (u = infinity).
inline constexpr int kInfinity = -1;

inline bool bound_le(int a, int b) {
  if (b == kInfinity) return true;
  if (a == kInfinity) return false;
  return a <= b;
}

struct EventAttributes {
  std::string name;
  bool controllable = false;
  bool forcible = false;
  int lower = 0;
  int upper = kInfinity;
};

/// Global registry of events. Event 0 is always "tick": controllable
/// (preemptable by forcible events) but not prohibitible, never forcible,
/// and carries no time bounds. Prohibitible = controllable and not tick.
class EventTable {
 public:
  EventTable() {
    events_.push_back(EventAttributes{"tick", true, false, 0, kInfinity});
    index_["tick"] = 0;
  }

  EventId add(const std::string& name, bool controllable, bool forcible,
              int lower, int upper) {
    if (name.empty()) throw std::invalid_argument("event name must be non-empty");
    if (name == "tick") throw std::invalid_argument("event name \"tick\" is reserved");
    if (index_.count(name))
      throw std::invalid_argument("duplicate event name: " + name);
    if (lower < 0) throw std::invalid_argument("negative lower bound: " + name);
    if (!bound_le(lower, upper))
      throw std::invalid_argument("lower bound exceeds upper bound: " + name);
    EventId id = static_cast<EventId>(events_.size());
    events_.push_back(EventAttributes{name, controllable, forcible, lower, upper});
    index_[name] = id;
    return id;
  }

  static constexpr EventId tick() { return 0; }

  int size() const { return static_cast<int>(events_.size()); }

  const EventAttributes& info(EventId e) const { return events_.at(e); }
  const std::string& name(EventId e) const { return events_.at(e).name; }
  bool controllable(EventId e) const { return events_.at(e).controllable; }
  bool uncontrollable(EventId e) const { return !controllable(e); }
  bool forcible(EventId e) const { return events_.at(e).forcible; }
  bool prohibitible(EventId e) const { return controllable(e) && e != tick(); }
  int lower(EventId e) const { return events_.at(e).lower; }
  int upper(EventId e) const { return events_.at(e).upper; }

  /// Remote events never expire (u = infinity); prospective events must
  /// occur within their upper bound.
  bool remote(EventId e) const { return upper(e) == kInfinity; }
  bool prospective(EventId e) const { return upper(e) != kInfinity; }

  EventId find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? kNoEvent : it->second;
  }

  EventId require(const std::string& name) const {
    EventId e = find(name);
    if (e == kNoEvent) throw std::invalid_argument("unknown event: " + name);
    return e;
  }

  /// Events sorted by name; all deterministic constructions walk alphabets
  /// in this order.
  std::vector<EventId> name_order(const std::vector<EventId>& events) const {
    std::vector<EventId> out(events);
    std::sort(out.begin(), out.end(), [&](EventId a, EventId b) {
      return name(a) < name(b);
    });
    return out;
  }

 private:
  std::vector<EventAttributes> events_;
  std::unordered_map<std::string, EventId> index_;
};

}  // namespace tdes
