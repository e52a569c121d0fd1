#pragma once

#include <algorithm>
#include <cassert>
#include <deque>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tdes/event_table.hpp"

namespace tdes {

/// Deterministic generator with a partial transition map. Absence of a
/// transition means the event is not defined at that state. The empty
/// generator (no states, initial == kNoState) is a valid value accepted by
/// every operation; its closed and marked languages are empty.
struct Generator {
  std::vector<EventId> alphabet;  // sorted ascending, no duplicates
  StateId initial = kNoState;
  std::vector<char> marked;
  std::vector<std::vector<std::pair<EventId, StateId>>> transitions;

  int state_count() const { return static_cast<int>(marked.size()); }

  bool empty() const { return initial == kNoState; }

  int transition_count() const {
    int n = 0;
    for (const auto& row : transitions) n += static_cast<int>(row.size());
    return n;
  }

  bool has_event(EventId e) const {
    return std::binary_search(alphabet.begin(), alphabet.end(), e);
  }

  StateId next(StateId s, EventId e) const {
    const auto& row = transitions[s];
    auto it = std::lower_bound(row.begin(), row.end(), e,
                               [](const std::pair<EventId, StateId>& t, EventId ev) {
                                 return t.first < ev;
                               });
    if (it != row.end() && it->first == e) return it->second;
    return kNoState;
  }

  bool defined(StateId s, EventId e) const { return next(s, e) != kNoState; }

  StateId add_state(bool is_marked = false) {
    marked.push_back(is_marked ? 1 : 0);
    transitions.emplace_back();
    return static_cast<StateId>(marked.size() - 1);
  }

  void add_transition(StateId src, EventId e, StateId dst) {
    assert(src >= 0 && src < state_count());
    assert(dst >= 0 && dst < state_count());
    if (!has_event(e)) throw std::invalid_argument("transition event not in alphabet");
    auto& row = transitions[src];
    auto it = std::lower_bound(row.begin(), row.end(), e,
                               [](const std::pair<EventId, StateId>& t, EventId ev) {
                                 return t.first < ev;
                               });
    if (it != row.end() && it->first == e) {
      if (it->second != dst)
        throw std::invalid_argument("nondeterministic transition");
      return;
    }
    row.insert(it, {e, dst});
  }

  void remove_transition(StateId src, EventId e) {
    auto& row = transitions[src];
    auto it = std::lower_bound(row.begin(), row.end(), e,
                               [](const std::pair<EventId, StateId>& t, EventId ev) {
                                 return t.first < ev;
                               });
    if (it != row.end() && it->first == e) row.erase(it);
  }
};

inline Generator empty_generator(std::vector<EventId> alphabet) {
  Generator g;
  g.alphabet = std::move(alphabet);
  return g;
}

inline std::vector<EventId> sorted_union(const std::vector<EventId>& a,
                                         const std::vector<EventId>& b) {
  std::vector<EventId> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline std::vector<EventId> sorted_intersection(const std::vector<EventId>& a,
                                                const std::vector<EventId>& b) {
  std::vector<EventId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

inline std::vector<EventId> sorted_difference(const std::vector<EventId>& a,
                                              const std::vector<EventId>& b) {
  std::vector<EventId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

inline bool is_subset(const std::vector<EventId>& a, const std::vector<EventId>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Renumbers states in breadth-first discovery order, events visited in
/// name order; unreachable states are dropped. old_of_new, when given,
/// receives for each new state the old state id it came from.
inline Generator canonicalize(const Generator& g, const EventTable& table,
                              std::vector<StateId>* old_of_new = nullptr) {
  if (old_of_new) old_of_new->clear();
  if (g.empty()) return empty_generator(g.alphabet);

  std::vector<EventId> order = table.name_order(g.alphabet);
  std::vector<StateId> new_of_old(g.state_count(), kNoState);
  std::vector<StateId> bfs;
  bfs.push_back(g.initial);
  new_of_old[g.initial] = 0;
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    StateId s = bfs[i];
    for (EventId e : order) {
      StateId t = g.next(s, e);
      if (t != kNoState && new_of_old[t] == kNoState) {
        new_of_old[t] = static_cast<StateId>(bfs.size());
        bfs.push_back(t);
      }
    }
  }

  Generator out;
  out.alphabet = g.alphabet;
  out.initial = 0;
  out.marked.resize(bfs.size(), 0);
  out.transitions.resize(bfs.size());
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    StateId old = bfs[i];
    out.marked[i] = g.marked[old];
    for (const auto& [e, t] : g.transitions[old]) {
      if (new_of_old[t] != kNoState)
        out.transitions[i].push_back({e, new_of_old[t]});
    }
    std::sort(out.transitions[i].begin(), out.transitions[i].end());
  }
  if (old_of_new) old_of_new->assign(bfs.begin(), bfs.end());
  return out;
}

/// Keeps exactly the states with keep[s] true (initial must survive or the
/// result is empty). States are then renumbered canonically.
inline Generator restrict_states(const Generator& g, const std::vector<char>& keep,
                                 const EventTable& table,
                                 std::vector<StateId>* old_of_new = nullptr) {
  if (g.empty() || !keep[g.initial]) {
    if (old_of_new) old_of_new->clear();
    return empty_generator(g.alphabet);
  }
  Generator pruned;
  pruned.alphabet = g.alphabet;
  pruned.initial = g.initial;
  pruned.marked = g.marked;
  pruned.transitions.resize(g.state_count());
  for (StateId s = 0; s < g.state_count(); ++s) {
    if (!keep[s]) continue;
    for (const auto& [e, t] : g.transitions[s])
      if (keep[t]) pruned.transitions[s].push_back({e, t});
  }
  return canonicalize(pruned, table, old_of_new);
}

inline std::vector<char> reachable_states(const Generator& g) {
  std::vector<char> seen(g.state_count(), 0);
  if (g.empty()) return seen;
  std::deque<StateId> queue{g.initial};
  seen[g.initial] = 1;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    for (const auto& [e, t] : g.transitions[s]) {
      (void)e;
      if (!seen[t]) {
        seen[t] = 1;
        queue.push_back(t);
      }
    }
  }
  return seen;
}

inline std::vector<char> coreachable_states(const Generator& g) {
  std::vector<std::vector<StateId>> rev(g.state_count());
  for (StateId s = 0; s < g.state_count(); ++s)
    for (const auto& [e, t] : g.transitions[s]) {
      (void)e;
      rev[t].push_back(s);
    }
  std::vector<char> seen(g.state_count(), 0);
  std::deque<StateId> queue;
  for (StateId s = 0; s < g.state_count(); ++s)
    if (g.marked[s]) {
      seen[s] = 1;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    for (StateId p : rev[s])
      if (!seen[p]) {
        seen[p] = 1;
        queue.push_back(p);
      }
  }
  return seen;
}

}  // namespace tdes
