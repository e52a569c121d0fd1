#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "tdes/language_ops.hpp"
#include "tdes/localization.hpp"

namespace tdes {

struct Verdict {
  bool pass = true;
  std::vector<EventId> counterexample;
  std::string reason;

  static Verdict fail(std::vector<EventId> witness, std::string why) {
    Verdict v;
    v.pass = false;
    v.counterexample = std::move(witness);
    v.reason = std::move(why);
    return v;
  }
};

inline std::string format_word(const std::vector<EventId>& word, const EventTable& table) {
  std::string out;
  for (EventId e : word) {
    if (!out.empty()) out += ".";
    out += table.name(e);
  }
  return out.empty() ? "(empty string)" : out;
}

namespace detail {

struct SearchNode {
  int parent;
  EventId via;
};

inline std::vector<EventId> path_of(const std::vector<SearchNode>& nodes, int i,
                                    EventId extra = kNoEvent) {
  std::vector<EventId> word;
  if (extra != kNoEvent) word.push_back(extra);
  while (i >= 0 && nodes[i].parent >= 0) {
    word.push_back(nodes[i].via);
    i = nodes[i].parent;
  }
  std::reverse(word.begin(), word.end());
  return word;
}

}  // namespace detail

/// Timed controllability of K with respect to G: after any shared string,
/// every G-eligible uncontrollable event must be K-eligible, and tick may
/// be dropped only when some forcible event remains K-eligible.
inline Verdict check_controllable(const Generator& plant, const Generator& k,
                                  const EventTable& table) {
  if (k.empty()) return {};
  if (plant.alphabet != k.alphabet)
    throw std::invalid_argument("check_controllable: alphabets differ");
  std::vector<EventId> order = table.name_order(k.alphabet);
  auto key = [&](StateId g, StateId s) {
    return static_cast<std::uint64_t>(g) * k.state_count() + s;
  };
  std::unordered_map<std::uint64_t, int> seen;
  std::vector<detail::SearchNode> nodes;
  std::vector<std::pair<StateId, StateId>> states;
  auto push = [&](StateId g, StateId s, int parent, EventId via) {
    auto [it, fresh] = seen.try_emplace(key(g, s), static_cast<int>(nodes.size()));
    if (fresh) {
      nodes.push_back({parent, via});
      states.push_back({g, s});
    }
  };
  push(plant.initial, k.initial, -1, kNoEvent);
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    auto [gs, ks] = states[i];
    bool forcible_eligible = false;
    for (const auto& [e, t] : k.transitions[ks]) {
      (void)t;
      forcible_eligible = forcible_eligible || table.forcible(e);
    }
    for (EventId e : order) {
      StateId gt = plant.next(gs, e);
      StateId kt = k.next(ks, e);
      if (gt != kNoState && kt == kNoState) {
        if (e == EventTable::tick()) {
          if (!forcible_eligible)
            return Verdict::fail(detail::path_of(nodes, i, e),
                                 "tick dropped with no forcible event eligible");
        } else if (table.uncontrollable(e)) {
          return Verdict::fail(detail::path_of(nodes, i, e),
                               "uncontrollable event disabled: " + table.name(e));
        }
      }
      if (gt != kNoState && kt != kNoState) push(gt, kt, i, e);
    }
  }
  return {};
}

/// Relative observability of K with respect to the ambient C, the plant G
/// and the given view. Searches lookalike pairs (s in K-bar, s' in C-bar,
/// equal projections) for a violation: s.e in K-bar, s'.e in L(G), yet
/// s'.e not in K-bar. With a responsibility set, only those events are
/// checked (per-agent relative coobservability).
inline Verdict check_rel_observable(const Generator& plant, const Generator& ambient,
                                    const Generator& k, const std::vector<EventId>& view,
                                    const EventTable& table,
                                    const std::vector<EventId>* responsibility = nullptr) {
  if (k.empty()) return {};
  std::vector<EventId> observable = sorted_intersection(view, k.alphabet);
  std::vector<EventId> unobservable = sorted_difference(k.alphabet, observable);
  std::vector<EventId> checked =
      responsibility ? sorted_intersection(*responsibility, k.alphabet) : k.alphabet;
  std::vector<EventId> order = table.name_order(k.alphabet);

  // Left side tracks s' through C, G and (while possible) K; right side
  // tracks s through K and G.
  struct State {
    StateId c, cg, ck;  // ck == kNoState once s' leaves K-bar
    StateId s, sg;
  };
  auto key = [&](const State& st) {
    std::uint64_t h = 1469598103934665603ull;
    for (StateId v : {st.c, st.cg, st.ck, st.s, st.sg})
      h = (h ^ static_cast<std::uint64_t>(v + 1)) * 1099511628211ull;
    return h;
  };
  struct KeyEq {
    bool operator()(const std::pair<std::uint64_t, State>& a,
                    const std::pair<std::uint64_t, State>& b) const {
      return a.first == b.first && a.second.c == b.second.c && a.second.cg == b.second.cg &&
             a.second.ck == b.second.ck && a.second.s == b.second.s &&
             a.second.sg == b.second.sg;
    }
  };
  struct PairHash {
    std::size_t operator()(const std::pair<std::uint64_t, State>& p) const {
      return p.first;
    }
  };
  struct Node {
    int parent;
    EventId via_left;  // kNoEvent when only the other side moved
  };
  std::unordered_map<std::pair<std::uint64_t, State>, int, PairHash, KeyEq> seen;
  std::vector<Node> nodes;
  std::vector<State> states;
  auto push = [&](const State& st, int parent, EventId via_left) {
    auto [it, fresh] = seen.try_emplace(std::make_pair(key(st), st),
                                        static_cast<int>(nodes.size()));
    if (fresh) {
      nodes.push_back({parent, via_left});
      states.push_back(st);
    }
  };
  // The reported witness is s'.e, the continuation the candidate is
  // missing although its lookalike allows e.
  auto left_path = [&](int i, EventId extra) {
    std::vector<EventId> word{extra};
    for (int j = i; j >= 0 && nodes[j].parent >= 0; j = nodes[j].parent)
      if (nodes[j].via_left != kNoEvent) word.push_back(nodes[j].via_left);
    std::reverse(word.begin(), word.end());
    return word;
  };

  push({ambient.initial, plant.initial, k.initial, k.initial, plant.initial}, -1, kNoEvent);
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    State st = states[i];
    for (EventId e : checked) {
      if (k.next(st.s, e) == kNoState) continue;
      if (plant.next(st.cg, e) == kNoState) continue;
      if (st.ck != kNoState && k.next(st.ck, e) != kNoState) continue;
      return Verdict::fail(left_path(i, e),
                           "lookalike strings disagree on " + table.name(e));
    }
    for (EventId e : order) {
      bool obs = std::binary_search(observable.begin(), observable.end(), e);
      StateId c2 = ambient.next(st.c, e);
      StateId cg2 = c2 == kNoState ? kNoState : plant.next(st.cg, e);
      StateId ck2 =
          (st.ck == kNoState || c2 == kNoState) ? kNoState : k.next(st.ck, e);
      StateId s2 = k.next(st.s, e);
      StateId sg2 = s2 == kNoState ? kNoState : plant.next(st.sg, e);
      if (obs) {
        if (c2 != kNoState && cg2 != kNoState && s2 != kNoState && sg2 != kNoState)
          push({c2, cg2, ck2, s2, sg2}, i, e);
      } else {
        if (c2 != kNoState && cg2 != kNoState) push({c2, cg2, ck2, st.s, st.sg}, i, e);
        if (s2 != kNoState && sg2 != kNoState) push({st.c, st.cg, st.ck, s2, sg2}, i, kNoEvent);
      }
    }
  }
  return {};
}

/// Structural and behavioral validity of a local automaton against SUP
/// and G: (a) only observable events change state; (b) along supervisor
/// strings the local automaton never blocks a SUP move or un-marks a
/// SUP-marked string, preempts tick exactly as SUP does where its owner is
/// eligible (preemptors), and disables its owner exactly as SUP does
/// (controllers).
inline Verdict check_local(const LocalAutomaton& loc, const Generator& sup,
                           const Generator& plant, const std::vector<EventId>& view,
                           const EventTable& table) {
  // (a) Unobservable events may appear only as selfloops.
  for (StateId s = 0; s < loc.g.state_count(); ++s)
    for (const auto& [e, t] : loc.g.transitions[s])
      if (t != s && !std::binary_search(view.begin(), view.end(), e))
        return Verdict::fail({e}, "unobservable event changes local state: " + table.name(e));

  if (sup.empty()) return {};

  std::vector<EventId> order = table.name_order(sup.alphabet);
  auto in_loc = [&](EventId e) {
    return std::binary_search(loc.g.alphabet.begin(), loc.g.alphabet.end(), e);
  };
  auto key = [&](StateId g, StateId x, StateId y) {
    return (static_cast<std::uint64_t>(g) * sup.state_count() + x) * loc.g.state_count() +
           y;
  };
  std::unordered_map<std::uint64_t, int> seen;
  std::vector<detail::SearchNode> nodes;
  struct Triple {
    StateId g, x, y;
  };
  std::vector<Triple> states;
  auto push = [&](StateId g, StateId x, StateId y, int parent, EventId via) {
    auto [it, fresh] = seen.try_emplace(key(g, x, y), static_cast<int>(nodes.size()));
    if (fresh) {
      nodes.push_back({parent, via});
      states.push_back({g, x, y});
    }
  };
  push(plant.initial, sup.initial, loc.g.initial, -1, kNoEvent);
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    Triple st = states[i];
    if (sup.marked[st.x] && !loc.g.marked[st.y])
      return Verdict::fail(detail::path_of(nodes, i),
                           "local automaton does not mark a SUP-marked string");
    for (EventId e : order) {
      StateId xt = sup.next(st.x, e);
      if (xt != kNoState && in_loc(e) && loc.g.next(st.y, e) == kNoState)
        return Verdict::fail(detail::path_of(nodes, i, e),
                             "local automaton blocks a supervisor move: " + table.name(e));
    }
    if (loc.role == CoverKind::Preemption && sup.next(st.x, loc.owner) != kNoState) {
      bool loc_tick = loc.g.next(st.y, EventTable::tick()) != kNoState;
      bool g_tick = plant.next(st.g, EventTable::tick()) != kNoState;
      bool sup_tick = sup.next(st.x, EventTable::tick()) != kNoState;
      if (loc_tick && g_tick && !sup_tick)
        return Verdict::fail(detail::path_of(nodes, i, EventTable::tick()),
                             "tick preemption inconsistent with SUP");
    }
    if (loc.role == CoverKind::Control) {
      bool loc_owner = loc.g.next(st.y, loc.owner) != kNoState;
      bool g_owner = plant.next(st.g, loc.owner) != kNoState;
      bool sup_owner = sup.next(st.x, loc.owner) != kNoState;
      if (loc_owner && g_owner && !sup_owner)
        return Verdict::fail(detail::path_of(nodes, i, loc.owner),
                             "disablement inconsistent with SUP");
    }
    for (EventId e : order) {
      StateId xt = sup.next(st.x, e);
      if (xt == kNoState) continue;
      StateId gt = plant.next(st.g, e);
      if (gt == kNoState) continue;  // outside L(G); nothing to follow
      StateId yt = in_loc(e) ? loc.g.next(st.y, e) : st.y;
      if (yt == kNoState) continue;  // already reported above
      push(gt, xt, yt, i, e);
    }
  }
  return {};
}

/// Control equivalence (Theorems 1 and 2): the lifted intersection of all
/// local automata with the plant has exactly the supervisor's closed and
/// marked languages.
inline Verdict check_equivalence(const Generator& plant,
                                 const std::vector<LocalAutomaton>& locs,
                                 const Generator& sup, const EventTable& table) {
  Generator joint = plant;
  for (const auto& loc : locs)
    joint = sync_product(joint, selfloop_lift(loc.g, plant.alphabet, table), table);
  Generator sup_full =
      sup.empty() ? empty_generator(plant.alphabet) : selfloop_lift(sup, plant.alphabet, table);
  CompareResult cmp = lang_compare(joint, sup_full, CompareMode::Equal, table);
  if (cmp.ok) return {};
  return Verdict::fail(cmp.counterexample, cmp.reason);
}

}  // namespace tdes
