#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tdes/language_ops.hpp"
#include "tdes/synthesis.hpp"

namespace tdes {

/// Determinized supervisor over uncertainty sets. Each state denotes the
/// subset of supervisor states reachable by lookalike strings; flags
/// capture the enable / disable / preempt information localization needs.
struct UncertaintyAutomaton {
  Generator g;  // over the observable view
  std::vector<std::vector<StateId>> members;
  std::vector<EventId> view;

  bool annotated = false;
  std::vector<char> e_tick;  // tick enabled at some member
  std::vector<char> m_flag;  // some member marked in SUP
  std::vector<char> t_flag;  // some member's plant state marked
  /// enabled[u][e]: event e defined at some member of u (indexed by EventId).
  std::vector<std::vector<char>> enabled;
  /// F_alpha: tick preempted at some member while alpha is eligible there.
  std::map<EventId, std::vector<char>> f_alpha;
  /// D_beta: beta disabled at some member where the plant allows it.
  std::map<EventId, std::vector<char>> d_beta;

  int state_count() const { return g.state_count(); }
};

/// Subset construction of the partial-observation supervisor; flags are
/// left unset until annotate_flags.
inline UncertaintyAutomaton build_supo(const Generator& sup,
                                       const std::vector<EventId>& view,
                                       const EventTable& table) {
  if (sup.empty()) throw std::invalid_argument("build_supo: empty supervisor");
  UncertaintyAutomaton supo;
  supo.view = sorted_intersection(view, sup.alphabet);
  ProjectionResult proj = project_determinize(sup, supo.view, table);
  supo.g = std::move(proj.g);
  supo.members = std::move(proj.subsets);
  return supo;
}

/// Computes every flag from its defining formula. The existential string
/// conditions are evaluated through the supervisor's recorded plant map.
inline void annotate_flags(UncertaintyAutomaton& supo, const Generator& plant,
                           const Supervisor& sup, const EventTable& table) {
  if (sup.plant_state.size() != static_cast<std::size_t>(sup.g.state_count()))
    throw std::invalid_argument("annotate_flags: supervisor lacks its plant state map");
  const int n = supo.state_count();
  supo.e_tick.assign(n, 0);
  supo.m_flag.assign(n, 0);
  supo.t_flag.assign(n, 0);
  supo.enabled.assign(n, std::vector<char>(table.size(), 0));
  supo.f_alpha.clear();
  supo.d_beta.clear();
  for (EventId e : sup.g.alphabet) {
    if (table.forcible(e)) supo.f_alpha[e].assign(n, 0);
    if (table.prohibitible(e)) supo.d_beta[e].assign(n, 0);
  }

  for (StateId u = 0; u < n; ++u) {
    for (StateId x : supo.members[u]) {
      StateId gx = sup.plant_state[x];
      if (sup.g.marked[x]) supo.m_flag[u] = 1;
      if (plant.marked[gx]) supo.t_flag[u] = 1;
      for (EventId e : sup.g.alphabet)
        if (sup.g.defined(x, e)) supo.enabled[u][e] = 1;
      bool tick_here = sup.g.defined(x, EventTable::tick());
      bool tick_in_plant = plant.defined(gx, EventTable::tick());
      for (auto& [alpha, flags] : supo.f_alpha)
        if (sup.g.defined(x, alpha) && !tick_here && tick_in_plant) flags[u] = 1;
      for (auto& [beta, flags] : supo.d_beta)
        if (!sup.g.defined(x, beta) && plant.defined(gx, beta)) flags[u] = 1;
    }
    supo.e_tick[u] = supo.enabled[u][EventTable::tick()];
  }
  supo.annotated = true;
}

struct Lemma1Violation {
  StateId uncertainty_set;
  EventId event;
  StateId enabled_at;
  StateId disabled_at;
};

/// Checks the Lemma-1 consistency property: inside any uncertainty set, a
/// controllable event enabled at one member is never disabled (for tick:
/// preempted) at another, except where the plant leaves it undefined.
/// restrict_events, when given, limits the scan to those controllable
/// events (per-agent checks in the decentralized pipeline).
inline std::vector<Lemma1Violation> check_lemma1(
    const UncertaintyAutomaton& supo, const Supervisor& sup, const Generator& plant,
    const EventTable& table, const std::vector<EventId>* restrict_events = nullptr) {
  std::vector<EventId> controllables;
  for (EventId e : sup.g.alphabet) {
    if (!table.controllable(e)) continue;
    if (restrict_events &&
        !std::binary_search(restrict_events->begin(), restrict_events->end(), e))
      continue;
    controllables.push_back(e);
  }
  std::vector<Lemma1Violation> report;
  for (StateId u = 0; u < supo.state_count(); ++u) {
    for (EventId e : controllables) {
      StateId on = kNoState, off = kNoState;
      for (StateId x : supo.members[u]) {
        if (sup.g.defined(x, e)) {
          if (on == kNoState) on = x;
        } else if (plant.defined(sup.plant_state[x], e)) {
          // Disabled (or, for tick, preempted) rather than undefined in G.
          if (off == kNoState) off = x;
        }
      }
      if (on != kNoState && off != kNoState) report.push_back({u, e, on, off});
    }
  }
  return report;
}

/// Text dump of uncertainty sets and flags for fixture diffing.
inline std::string dump_uncertainty(const UncertaintyAutomaton& supo,
                                    const EventTable& table) {
  std::ostringstream out;
  for (StateId u = 0; u < supo.state_count(); ++u) {
    out << "set " << u << " {";
    for (std::size_t i = 0; i < supo.members[u].size(); ++i)
      out << (i ? " " : "") << supo.members[u][i];
    out << "}";
    if (supo.annotated) {
      out << " Etick=" << int(supo.e_tick[u]) << " M=" << int(supo.m_flag[u])
          << " T=" << int(supo.t_flag[u]);
      for (const auto& [alpha, flags] : supo.f_alpha)
        out << " F[" << table.name(alpha) << "]=" << int(flags[u]);
      for (const auto& [beta, flags] : supo.d_beta)
        out << " D[" << table.name(beta) << "]=" << int(flags[u]);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace tdes
