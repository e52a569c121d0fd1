#pragma once

#include <algorithm>
#include <deque>
#include <numeric>
#include <string>
#include <vector>

#include "tdes/observer.hpp"

namespace tdes {

enum class CoverKind { Preemption, Control };

struct ConsistencyKind {
  CoverKind kind;
  EventId event;  // the forcible alpha or prohibitible beta
};

/// Preemption / control consistency of two uncertainty sets, evaluated
/// directly from the annotated flags.
inline bool consistent(const UncertaintyAutomaton& supo, StateId u, StateId v,
                       const ConsistencyKind& kind) {
  if (!supo.annotated)
    throw std::invalid_argument("consistent: flags not annotated");
  if (kind.kind == CoverKind::Preemption) {
    const auto& f = supo.f_alpha.at(kind.event);
    return !(supo.e_tick[u] && f[v]) && !(supo.e_tick[v] && f[u]);
  }
  const auto& d = supo.d_beta.at(kind.event);
  bool e_u = supo.enabled[u][kind.event], e_v = supo.enabled[v][kind.event];
  if ((e_u && d[v]) || (e_v && d[u])) return false;
  if (supo.t_flag[u] == supo.t_flag[v] && supo.m_flag[u] != supo.m_flag[v]) return false;
  return true;
}

/// Family of cells over the uncertainty sets. The greedy builder always
/// produces a partition (a congruence), so cell_of is total.
struct Cover {
  ConsistencyKind kind;
  std::vector<std::vector<StateId>> cells;  // each sorted; ordered by least member
  std::vector<int> cell_of;                 // uncertainty set -> cell
};

/// Greedy congruence construction: states in canonical order are merged
/// into the lowest-indexed cell for which the merge, propagated through
/// forward closure over observable successors, never pairs two
/// inconsistent states; otherwise they open a new cell.
inline Cover compute_cover(const UncertaintyAutomaton& supo, const ConsistencyKind& kind) {
  const int n = supo.state_count();
  Cover cover;
  cover.kind = kind;
  if (n == 0) return cover;

  // Union-find with per-root member lists; trials run on a scratch copy.
  struct Partition {
    std::vector<int> parent;
    std::vector<std::vector<StateId>> members;
    int find(int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    }
  };
  Partition committed;
  committed.parent.resize(n);
  std::iota(committed.parent.begin(), committed.parent.end(), 0);
  committed.members.resize(n);
  for (int i = 0; i < n; ++i) committed.members[i] = {i};

  // Attempts to unite a and b in part, propagating forward closure;
  // returns false if an inconsistent pair would share a cell.
  auto try_merge = [&](Partition& part, StateId a, StateId b) {
    std::deque<std::pair<int, int>> pending{{a, b}};
    while (!pending.empty()) {
      auto [x, y] = pending.back();
      pending.pop_back();
      int rx = part.find(x), ry = part.find(y);
      if (rx == ry) continue;
      for (StateId p : part.members[rx])
        for (StateId q : part.members[ry])
          if (!consistent(supo, p, q, kind)) return false;
      // Union by size; keep member lists on the root.
      if (part.members[rx].size() < part.members[ry].size()) std::swap(rx, ry);
      part.parent[ry] = rx;
      part.members[rx].insert(part.members[rx].end(), part.members[ry].begin(),
                              part.members[ry].end());
      part.members[ry].clear();
      // Forward closure: successors of the united cell must share a cell.
      for (EventId e : supo.view) {
        StateId first = kNoState;
        for (StateId m : part.members[rx]) {
          StateId t = supo.g.next(m, e);
          if (t == kNoState) continue;
          if (first == kNoState)
            first = t;
          else if (part.find(first) != part.find(t))
            pending.push_back({first, t});
        }
      }
    }
    return true;
  };

  std::vector<int> cell_order;  // roots in cell-creation order
  auto in_some_cell = [&](StateId s) {
    int r = committed.find(s);
    for (int root : cell_order)
      if (committed.find(root) == r) return true;
    return false;
  };

  for (StateId s = 0; s < n; ++s) {
    if (in_some_cell(s)) continue;
    bool placed = false;
    for (int root : cell_order) {
      Partition trial = committed;
      if (try_merge(trial, s, root)) {
        committed = std::move(trial);
        placed = true;
        break;
      }
    }
    if (!placed) cell_order.push_back(s);
  }

  // Emit cells ordered by least member.
  std::vector<std::vector<StateId>> cells;
  std::vector<int> root_cell(n, -1);
  cover.cell_of.assign(n, -1);
  for (StateId s = 0; s < n; ++s) {
    int r = committed.find(s);
    if (root_cell[r] < 0) {
      root_cell[r] = static_cast<int>(cells.size());
      cells.emplace_back();
    }
    cells[root_cell[r]].push_back(s);
    cover.cell_of[s] = root_cell[r];
  }
  cover.cells = std::move(cells);
  return cover;
}

/// Post-hoc validity check, independent of the greedy builder: internal
/// pairwise consistency plus forward closure over every observable event.
inline bool cover_valid(const UncertaintyAutomaton& supo, const Cover& cover) {
  for (const auto& cell : cover.cells)
    for (std::size_t i = 0; i < cell.size(); ++i)
      for (std::size_t j = i + 1; j < cell.size(); ++j)
        if (!consistent(supo, cell[i], cell[j], cover.kind)) return false;
  for (const auto& cell : cover.cells)
    for (EventId e : supo.view) {
      int target = -1;
      for (StateId u : cell) {
        StateId t = supo.g.next(u, e);
        if (t == kNoState) continue;
        if (target < 0)
          target = cover.cell_of[t];
        else if (cover.cell_of[t] != target)
          return false;
      }
    }
  for (int c : cover.cell_of)
    if (c < 0) return false;
  return true;
}

/// Quotient generator J over the observable view, with the flag
/// functions psi used by the local-automaton construction.
struct Quotient {
  Generator j;                  // canonical
  std::vector<char> psi_event;  // per J-state: owner event defined at some member state
  std::vector<char> psi_tick;   // per J-state: tick enabled at some member set
  std::vector<std::vector<int>> state_cells;  // J-state -> cover cells it came from
};

inline Quotient build_quotient(const Cover& cover, const UncertaintyAutomaton& supo) {
  if (!supo.annotated)
    throw std::invalid_argument("build_quotient: flags not annotated");
  const int m = static_cast<int>(cover.cells.size());
  Generator raw;
  raw.alphabet = supo.view;
  for (int i = 0; i < m; ++i) {
    bool marked = false;
    for (StateId u : cover.cells[i]) marked = marked || supo.m_flag[u];
    raw.add_state(marked);
  }
  raw.initial = cover.cell_of[supo.g.initial];
  for (int i = 0; i < m; ++i)
    for (EventId e : supo.view)
      for (StateId u : cover.cells[i]) {
        StateId t = supo.g.next(u, e);
        if (t != kNoState) {
          raw.add_transition(i, e, cover.cell_of[t]);
          break;
        }
      }

  // Need the table only for name order; the view carries its own ids, so
  // canonical numbering is done against a name order derived lazily by the
  // caller. To keep the construction self-contained the quotient is
  // canonicalized by the caller-supplied table in build_local; here states
  // keep cover-cell order.
  Quotient q;
  q.j = std::move(raw);
  q.psi_event.assign(m, 0);
  q.psi_tick.assign(m, 0);
  EventId owner = cover.kind.event;
  for (int i = 0; i < m; ++i) {
    q.state_cells.push_back({i});
    for (StateId u : cover.cells[i]) {
      if (supo.enabled[u][owner]) q.psi_event[i] = 1;
      if (supo.e_tick[u]) q.psi_tick[i] = 1;
    }
  }
  return q;
}

/// Local preemptor (for a forcible event) or local controller (for a
/// prohibitible event) with its communication event set.
struct LocalAutomaton {
  Generator g;
  CoverKind role;
  EventId owner;
  std::vector<EventId> sigma_com;

  std::string role_name() const {
    return role == CoverKind::Preemption ? "preemptor" : "controller";
  }
};

/// Builds the local automaton from the quotient: the alphabet is the owner
/// event (plus tick for preemptors) plus every observable event that
/// changes state somewhere in J; transitions are the restriction of J's,
/// and an unobservable owner (or tick) appears as selfloops exactly where
/// the matching psi flag is set.
inline LocalAutomaton build_local(const Quotient& quotient, const ConsistencyKind& kind,
                                  const std::vector<EventId>& view,
                                  const EventTable& table) {
  LocalAutomaton loc;
  loc.role = kind.kind;
  loc.owner = kind.event;

  const Generator& j = quotient.j;
  for (EventId e : j.alphabet) {
    if (e == kind.event) continue;
    if (kind.kind == CoverKind::Preemption && e == EventTable::tick()) continue;
    bool moves = false;
    for (StateId s = 0; s < j.state_count() && !moves; ++s) {
      StateId t = j.next(s, e);
      moves = t != kNoState && t != s;
    }
    if (moves) loc.sigma_com.push_back(e);
  }

  std::vector<EventId> sigma_loc = loc.sigma_com;
  auto include = [&](EventId e) {
    if (!std::binary_search(sigma_loc.begin(), sigma_loc.end(), e))
      sigma_loc.insert(std::lower_bound(sigma_loc.begin(), sigma_loc.end(), e), e);
  };
  include(kind.event);
  if (kind.kind == CoverKind::Preemption) include(EventTable::tick());

  Generator raw;
  raw.alphabet = sigma_loc;
  raw.initial = j.initial;
  raw.marked = j.marked;
  raw.transitions.resize(j.state_count());
  bool observable_owner =
      std::binary_search(view.begin(), view.end(), kind.event);
  bool observable_tick =
      std::binary_search(view.begin(), view.end(), EventTable::tick());
  for (StateId s = 0; s < j.state_count(); ++s)
    for (const auto& [e, t] : j.transitions[s])
      if (std::binary_search(sigma_loc.begin(), sigma_loc.end(), e))
        raw.add_transition(s, e, t);
  if (!observable_owner)
    for (StateId s = 0; s < j.state_count(); ++s)
      if (quotient.psi_event[s]) raw.add_transition(s, kind.event, s);
  if (kind.kind == CoverKind::Preemption && !observable_tick)
    for (StateId s = 0; s < j.state_count(); ++s)
      if (quotient.psi_tick[s]) raw.add_transition(s, EventTable::tick(), s);

  loc.g = canonicalize(raw, table);
  return loc;
}

inline LocalAutomaton localize_one(const UncertaintyAutomaton& supo,
                                   const ConsistencyKind& kind,
                                   const EventTable& table) {
  Cover cover = compute_cover(supo, kind);
  Quotient q = build_quotient(cover, supo);
  return build_local(q, kind, supo.view, table);
}

/// One local preemptor per forcible event and one local controller per
/// prohibitible event, each built from its own cover of the same SUPO.
inline std::vector<LocalAutomaton> localize_all(const UncertaintyAutomaton& supo,
                                                const std::vector<EventId>& forcibles,
                                                const std::vector<EventId>& prohibitibles,
                                                const EventTable& table) {
  std::vector<LocalAutomaton> out;
  for (EventId alpha : table.name_order(forcibles))
    out.push_back(localize_one(supo, {CoverKind::Preemption, alpha}, table));
  for (EventId beta : table.name_order(prohibitibles))
    out.push_back(localize_one(supo, {CoverKind::Control, beta}, table));
  return out;
}

}  // namespace tdes
