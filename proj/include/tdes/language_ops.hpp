#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tdes/generator.hpp"

namespace tdes {

/// Synchronous product: shared events synchronize, private events
/// interleave. Result alphabet is the union; only reachable states are
/// kept (no coreachability pruning) and numbering is canonical.
inline Generator sync_product(const Generator& a, const Generator& b,
                              const EventTable& table) {
  std::vector<EventId> alphabet = sorted_union(a.alphabet, b.alphabet);
  if (a.empty() || b.empty()) return empty_generator(alphabet);

  std::vector<EventId> order = table.name_order(alphabet);
  auto key = [&](StateId sa, StateId sb) {
    return static_cast<std::uint64_t>(sa) * b.state_count() + sb;
  };
  std::unordered_map<std::uint64_t, StateId> ids;
  std::vector<std::pair<StateId, StateId>> pairs;

  Generator out;
  out.alphabet = alphabet;
  auto intern = [&](StateId sa, StateId sb) {
    auto [it, fresh] = ids.try_emplace(key(sa, sb), static_cast<StateId>(pairs.size()));
    if (fresh) {
      pairs.push_back({sa, sb});
      out.add_state(a.marked[sa] && b.marked[sb]);
    }
    return it->second;
  };

  out.initial = intern(a.initial, b.initial);
  for (StateId s = 0; s < static_cast<StateId>(pairs.size()); ++s) {
    auto [sa, sb] = pairs[s];
    for (EventId e : order) {
      StateId ta = sa, tb = sb;
      if (a.has_event(e)) {
        ta = a.next(sa, e);
        if (ta == kNoState) continue;
      }
      if (b.has_event(e)) {
        tb = b.next(sb, e);
        if (tb == kNoState) continue;
      }
      out.add_transition(s, e, intern(ta, tb));
    }
  }
  return out;
}

/// Inverse projection by selflooping the absent events at every state:
/// L(result) = P^-1(L(a)) where P projects full_alphabet onto a.alphabet.
inline Generator selfloop_lift(const Generator& a,
                               const std::vector<EventId>& full_alphabet,
                               const EventTable& table) {
  if (!is_subset(a.alphabet, full_alphabet))
    throw std::invalid_argument("selfloop_lift: alphabet is not a subset of the target");
  if (a.empty()) return empty_generator(full_alphabet);
  Generator out;
  out.alphabet = full_alphabet;
  out.initial = a.initial;
  out.marked = a.marked;
  out.transitions = a.transitions;
  std::vector<EventId> extra = sorted_difference(full_alphabet, a.alphabet);
  for (StateId s = 0; s < out.state_count(); ++s)
    for (EventId e : extra) out.add_transition(s, e, s);
  return canonicalize(out, table);
}

struct ProjectionResult {
  Generator g;
  /// For each result state, the sorted subset of source states it denotes
  /// (closed under unobservable reach).
  std::vector<std::vector<StateId>> subsets;
};

/// Natural-projection image automaton via subset construction. Each result
/// state is the uncertainty set of source states reachable by lookalike
/// strings; closure under unobservable events is applied both before and
/// after each observable event.
inline ProjectionResult project_determinize(const Generator& a,
                                            const std::vector<EventId>& observable,
                                            const EventTable& table) {
  if (!is_subset(observable, a.alphabet))
    throw std::invalid_argument("project_determinize: view not within alphabet");
  ProjectionResult res;
  res.g.alphabet = observable;
  if (a.empty()) return res;

  std::vector<EventId> unobs = sorted_difference(a.alphabet, observable);
  auto closure = [&](std::vector<StateId> set) {
    std::deque<StateId> queue(set.begin(), set.end());
    std::vector<char> in(a.state_count(), 0);
    for (StateId s : set) in[s] = 1;
    while (!queue.empty()) {
      StateId s = queue.front();
      queue.pop_front();
      for (EventId u : unobs) {
        StateId t = a.next(s, u);
        if (t != kNoState && !in[t]) {
          in[t] = 1;
          queue.push_back(t);
        }
      }
    }
    std::vector<StateId> out;
    for (StateId s = 0; s < a.state_count(); ++s)
      if (in[s]) out.push_back(s);
    return out;
  };

  struct VecHash {
    std::size_t operator()(const std::vector<StateId>& v) const {
      std::size_t h = 1469598103934665603ull;
      for (StateId s : v) h = (h ^ static_cast<std::size_t>(s)) * 1099511628211ull;
      return h;
    }
  };
  std::unordered_map<std::vector<StateId>, StateId, VecHash> ids;
  std::vector<EventId> order = table.name_order(observable);

  auto intern = [&](std::vector<StateId> set) {
    auto [it, fresh] = ids.try_emplace(std::move(set), static_cast<StateId>(res.subsets.size()));
    if (fresh) {
      res.subsets.push_back(it->first);
      bool m = false;
      for (StateId s : it->first) m = m || a.marked[s];
      res.g.add_state(m);
    }
    return it->second;
  };

  res.g.initial = intern(closure({a.initial}));
  for (StateId u = 0; u < static_cast<StateId>(res.subsets.size()); ++u) {
    for (EventId e : order) {
      std::vector<StateId> succ;
      std::vector<char> in(a.state_count(), 0);
      for (StateId s : res.subsets[u]) {
        StateId t = a.next(s, e);
        if (t != kNoState && !in[t]) {
          in[t] = 1;
          succ.push_back(t);
        }
      }
      if (succ.empty()) continue;
      std::sort(succ.begin(), succ.end());
      res.g.add_transition(u, e, intern(closure(std::move(succ))));
    }
  }
  return res;
}

/// Keeps exactly the states both reachable and coreachable; empty result
/// if the initial state dies.
inline Generator trim(const Generator& g, const EventTable& table,
                      std::vector<StateId>* old_of_new = nullptr) {
  if (g.empty()) {
    if (old_of_new) old_of_new->clear();
    return empty_generator(g.alphabet);
  }
  std::vector<char> reach = reachable_states(g);
  std::vector<char> coreach = coreachable_states(g);
  std::vector<char> keep(g.state_count(), 0);
  for (StateId s = 0; s < g.state_count(); ++s) keep[s] = reach[s] && coreach[s];
  return restrict_states(g, keep, table, old_of_new);
}

enum class CompareMode { Equal, Subset };

struct CompareResult {
  bool ok = true;
  /// Shortest witness (breadth-first, event-name tie break) when ok is
  /// false; events of the offending string in order.
  std::vector<EventId> counterexample;
  std::string reason;
};

/// Decides equality (or inclusion, a within b) of both closed and marked
/// languages by product-automaton search. Alphabets must be equal.
inline CompareResult lang_compare(const Generator& a, const Generator& b,
                                  CompareMode mode, const EventTable& table) {
  if (a.alphabet != b.alphabet)
    throw std::invalid_argument("lang_compare: alphabets differ (lift first)");
  CompareResult res;

  if (a.empty() || b.empty()) {
    bool a_has = !a.empty();
    bool b_has = !b.empty();
    if (a_has == b_has) return res;
    if (!a_has && mode == CompareMode::Subset) return res;
    res.ok = false;
    res.reason = a_has ? "closed language of left not within right"
                       : "closed language of right not within left";
    return res;
  }

  std::vector<EventId> order = table.name_order(a.alphabet);
  auto key = [&](StateId sa, StateId sb) {
    return static_cast<std::uint64_t>(sa) * b.state_count() + sb;
  };
  std::unordered_map<std::uint64_t, int> seen;
  struct Node {
    StateId sa, sb;
    int parent;
    EventId via;
  };
  std::vector<Node> nodes;
  auto fail = [&](int node, EventId extra, const std::string& reason) {
    res.ok = false;
    res.reason = reason;
    std::vector<EventId> path;
    if (extra != kNoEvent) path.push_back(extra);
    for (int i = node; nodes[i].parent >= 0; i = nodes[i].parent)
      path.push_back(nodes[i].via);
    std::reverse(path.begin(), path.end());
    res.counterexample = std::move(path);
    return res;
  };

  nodes.push_back({a.initial, b.initial, -1, kNoEvent});
  seen[key(a.initial, b.initial)] = 0;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    StateId sa = nodes[i].sa, sb = nodes[i].sb;
    if (a.marked[sa] && !b.marked[sb])
      return fail(i, kNoEvent, "marked language of left not within right");
    if (mode == CompareMode::Equal && b.marked[sb] && !a.marked[sa])
      return fail(i, kNoEvent, "marked language of right not within left");
    for (EventId e : order) {
      StateId ta = a.next(sa, e);
      StateId tb = b.next(sb, e);
      if (ta != kNoState && tb == kNoState)
        return fail(i, e, "closed language of left not within right");
      if (mode == CompareMode::Equal && tb != kNoState && ta == kNoState)
        return fail(i, e, "closed language of right not within left");
      if (ta == kNoState || tb == kNoState) continue;
      auto [it, fresh] = seen.try_emplace(key(ta, tb), static_cast<int>(nodes.size()));
      if (fresh) nodes.push_back({ta, tb, i, e});
    }
  }
  return res;
}

inline bool lang_equal(const Generator& a, const Generator& b, const EventTable& table) {
  return lang_compare(a, b, CompareMode::Equal, table).ok;
}

/// Membership of a string in the closed (and marked) language.
inline bool accepts(const Generator& g, const std::vector<EventId>& word,
                    bool require_marked = false) {
  if (g.empty()) return false;
  StateId s = g.initial;
  for (EventId e : word) {
    s = g.next(s, e);
    if (s == kNoState) return false;
  }
  return require_marked ? g.marked[s] != 0 : true;
}

}  // namespace tdes
