#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "tdes/generator.hpp"
#include "tdes/language_ops.hpp"

namespace tdes {

/// Untimed activity transition graph plus per-event time bounds; the
/// source form of a TDES component. Bounds come from the event table
/// unless overridden (a component that does not time-constrain a shared
/// event overrides it to (0, infinity)).
struct ATGSpec {
  std::string name;
  int activity_count = 0;
  StateId initial = kNoState;
  std::vector<char> marked;
  std::vector<std::vector<std::pair<EventId, StateId>>> transitions;
  std::vector<EventId> events;  // sorted, subset of the activity events; no tick
  std::map<EventId, std::pair<int, int>> bounds_override;

  StateId next(StateId a, EventId e) const {
    for (const auto& [ev, t] : transitions[a])
      if (ev == e) return t;
    return kNoState;
  }
};

enum class MarkingRule {
  /// Marked TTG states are exactly those whose activity is marked.
  ActivityMarked,
  /// Additionally require every timer to sit at its default.
  DefaultTimers,
};

namespace detail {

struct TimerKeyHash {
  std::size_t operator()(const std::vector<std::int32_t>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (std::int32_t x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
    return h;
  }
};

}  // namespace detail

/// Builds the timed transition graph of an activity model. States are
/// reachable (activity, timer-vector) pairs; tick advances timers and is
/// preempted when an enabled prospective event's timer hits zero.
inline Generator build_ttg(const ATGSpec& atg, const EventTable& table,
                           MarkingRule marking = MarkingRule::ActivityMarked) {
  const int n = static_cast<int>(atg.events.size());
  std::vector<int> lower(n), upper(n);
  for (int i = 0; i < n; ++i) {
    EventId e = atg.events[i];
    if (e == EventTable::tick())
      throw std::invalid_argument("tick is not an activity event");
    auto it = atg.bounds_override.find(e);
    lower[i] = it != atg.bounds_override.end() ? it->second.first : table.lower(e);
    upper[i] = it != atg.bounds_override.end() ? it->second.second : table.upper(e);
    if (lower[i] < 0 || !bound_le(lower[i], upper[i]))
      throw std::invalid_argument("event has invalid bounds: " + table.name(e));
  }
  auto timer_default = [&](int i) {
    return upper[i] == kInfinity ? lower[i] : upper[i];
  };

  Generator out;
  out.alphabet = sorted_union({EventTable::tick()}, atg.events);
  if (atg.initial == kNoState) return out;

  // State key: activity followed by one timer per event.
  using Key = std::vector<std::int32_t>;
  std::unordered_map<Key, StateId, detail::TimerKeyHash> ids;
  std::vector<Key> keys;

  auto is_marked = [&](const Key& k) {
    if (!atg.marked[k[0]]) return false;
    if (marking == MarkingRule::DefaultTimers)
      for (int i = 0; i < n; ++i)
        if (k[i + 1] != timer_default(i)) return false;
    return true;
  };
  auto intern = [&](Key k) {
    auto [it, fresh] = ids.try_emplace(std::move(k), static_cast<StateId>(keys.size()));
    if (fresh) {
      keys.push_back(it->first);
      out.add_state(is_marked(it->first));
    }
    return it->second;
  };

  Key init(n + 1);
  init[0] = atg.initial;
  for (int i = 0; i < n; ++i) init[i + 1] = timer_default(i);
  out.initial = intern(std::move(init));

  std::vector<EventId> order = table.name_order(out.alphabet);
  std::vector<int> index_of(table.size(), -1);
  for (int i = 0; i < n; ++i) index_of[atg.events[i]] = i;

  for (StateId s = 0; s < static_cast<StateId>(keys.size()); ++s) {
    const Key cur = keys[s];
    StateId act = cur[0];
    for (EventId e : order) {
      if (e == EventTable::tick()) {
        bool blocked = false;
        for (int i = 0; i < n && !blocked; ++i)
          blocked = upper[i] != kInfinity && atg.next(act, atg.events[i]) != kNoState &&
                    cur[i + 1] == 0;
        if (blocked) continue;
        Key nxt = cur;
        for (int i = 0; i < n; ++i) {
          if (atg.next(act, atg.events[i]) == kNoState)
            nxt[i + 1] = timer_default(i);
          else if (nxt[i + 1] > 0)
            nxt[i + 1] -= 1;
        }
        out.add_transition(s, e, intern(std::move(nxt)));
        continue;
      }
      int i = index_of[e];
      if (i < 0) continue;
      StateId act2 = atg.next(act, e);
      if (act2 == kNoState) continue;
      bool eligible = upper[i] == kInfinity ? cur[i + 1] == 0
                                            : cur[i + 1] <= upper[i] - lower[i];
      if (!eligible) continue;
      Key nxt = cur;
      nxt[0] = act2;
      nxt[i + 1] = timer_default(i);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        bool enabled_before = atg.next(act, atg.events[j]) != kNoState;
        bool enabled_after = atg.next(act2, atg.events[j]) != kNoState;
        if (!(enabled_before && enabled_after)) nxt[j + 1] = timer_default(j);
      }
      out.add_transition(s, e, intern(std::move(nxt)));
    }
  }
  return out;
}

/// Composition of component TDES: tick is shared by all components,
/// everything else should be private per the disjoint-alphabet assumption.
/// Shared non-tick events still synchronize but are reported as warnings.
inline Generator comp(const std::vector<Generator>& components, const EventTable& table,
                      std::vector<std::string>* warnings = nullptr) {
  if (components.empty())
    throw std::invalid_argument("comp: no components");
  for (const auto& c : components)
    if (!c.has_event(EventTable::tick()))
      throw std::invalid_argument("comp: component without tick");
  if (warnings) {
    for (std::size_t i = 0; i < components.size(); ++i)
      for (std::size_t j = i + 1; j < components.size(); ++j) {
        auto shared = sorted_intersection(components[i].alphabet, components[j].alphabet);
        for (EventId e : shared)
          if (e != EventTable::tick())
            warnings->push_back("shared non-tick event: " + table.name(e));
      }
  }
  Generator out = components[0];
  for (std::size_t i = 1; i < components.size(); ++i)
    out = sync_product(out, components[i], table);
  return out;
}

}  // namespace tdes
