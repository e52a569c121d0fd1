#pragma once

#include <cstdint>
#include <deque>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "tdes/generator.hpp"
#include "tdes/language_ops.hpp"

namespace tdes {

/// A supervisor candidate: a generator plus, for each of its states, the
/// plant state every string reaching it ends up in. Synthesis keeps this
/// map alive through all pruning so that downstream passes can evaluate
/// "defined in G" conditions as per-state lookups.
struct Supervisor {
  Generator g;
  std::vector<StateId> plant_state;

  bool empty() const { return g.empty(); }
};

/// Ambient-language policy for the relative-observability passes.
enum class AmbientPolicy {
  /// C is the supremal controllable sublanguage, computed once up front.
  FixedSupcon,
  /// C follows the shrinking candidate: each pass uses the current K.
  Iterated,
  /// C is the raw meet E cap Lm(G), trimmed.
  RawMeet,
};

struct SynthesisOptions {
  AmbientPolicy ambient = AmbientPolicy::FixedSupcon;
  /// Enforce Lm(G)-closedness during the controllability fixpoint by
  /// deleting plant-marked states the candidate does not mark.
  bool lmg_closed = true;
};

struct SynthesisLog {
  std::vector<std::string> lines;
  void note(const std::string& s) { lines.push_back(s); }
};

namespace detail {

/// Meet of E and G over a common alphabet, with the G-component recorded.
/// Marked states are those marked in both operands.
inline Supervisor meet_supervisor(const Generator& spec, const Generator& plant,
                                  const EventTable& table) {
  if (spec.alphabet != plant.alphabet)
    throw std::invalid_argument("meet: alphabets differ (lift first)");
  Supervisor sup;
  sup.g.alphabet = plant.alphabet;
  if (spec.empty() || plant.empty()) return sup;

  std::vector<EventId> order = table.name_order(plant.alphabet);
  auto key = [&](StateId e, StateId g) {
    return static_cast<std::uint64_t>(e) * plant.state_count() + g;
  };
  std::unordered_map<std::uint64_t, StateId> ids;
  std::vector<std::pair<StateId, StateId>> pairs;
  auto intern = [&](StateId e, StateId g) {
    auto [it, fresh] = ids.try_emplace(key(e, g), static_cast<StateId>(pairs.size()));
    if (fresh) {
      pairs.push_back({e, g});
      sup.g.add_state(spec.marked[e] && plant.marked[g]);
      sup.plant_state.push_back(g);
    }
    return it->second;
  };
  sup.g.initial = intern(spec.initial, plant.initial);
  for (StateId s = 0; s < static_cast<StateId>(pairs.size()); ++s) {
    auto [se, sg] = pairs[s];
    for (EventId ev : order) {
      StateId te = spec.next(se, ev);
      if (te == kNoState) continue;
      StateId tg = plant.next(sg, ev);
      if (tg == kNoState) continue;
      sup.g.add_transition(s, ev, intern(te, tg));
    }
  }
  return sup;
}

inline Supervisor restrict_supervisor(const Supervisor& sup, const std::vector<char>& keep,
                                      const EventTable& table,
                                      std::vector<StateId>* old_of_new = nullptr) {
  std::vector<StateId> remap;
  Supervisor out;
  out.g = restrict_states(sup.g, keep, table, &remap);
  out.plant_state.reserve(remap.size());
  for (StateId old : remap) out.plant_state.push_back(sup.plant_state[old]);
  if (old_of_new) *old_of_new = std::move(remap);
  return out;
}

/// Supremal controllable and Lm(G)-closed fixpoint on an existing
/// candidate: repeatedly delete states violating timed controllability
/// (an uncontrollable event G-eligible but not K-eligible, or tick
/// G-eligible but not K-eligible with no forcible event K-eligible) or
/// Lm(G)-closedness (plant-marked state not marked in K), then trim.
inline Supervisor prune_supcon(const Generator& plant, const Supervisor& start,
                               const EventTable& table,
                               std::vector<StateId>* old_of_new = nullptr,
                               bool* changed_out = nullptr, bool lmg_closed = true) {
  if (changed_out) *changed_out = false;
  if (start.empty()) {
    if (old_of_new) old_of_new->clear();
    return start;
  }
  const Generator& k = start.g;
  const int n = k.state_count();
  std::vector<char> alive(n, 1);
  auto k_defined = [&](StateId s, EventId e) {
    StateId t = k.next(s, e);
    return t != kNoState && alive[t];
  };

  bool shrunk = true;
  bool any = false;
  while (shrunk) {
    shrunk = false;
    // Reachability and coreachability within the surviving subgraph.
    std::vector<char> reach(n, 0), coreach(n, 0);
    if (alive[k.initial]) {
      std::deque<StateId> q{k.initial};
      reach[k.initial] = 1;
      while (!q.empty()) {
        StateId s = q.front();
        q.pop_front();
        for (const auto& [e, t] : k.transitions[s]) {
          (void)e;
          if (alive[t] && !reach[t]) {
            reach[t] = 1;
            q.push_back(t);
          }
        }
      }
    }
    {
      std::vector<std::vector<StateId>> rev(n);
      for (StateId s = 0; s < n; ++s) {
        if (!alive[s]) continue;
        for (const auto& [e, t] : k.transitions[s]) {
          (void)e;
          if (alive[t]) rev[t].push_back(s);
        }
      }
      std::deque<StateId> q;
      for (StateId s = 0; s < n; ++s)
        if (alive[s] && k.marked[s]) {
          coreach[s] = 1;
          q.push_back(s);
        }
      while (!q.empty()) {
        StateId s = q.front();
        q.pop_front();
        for (StateId p : rev[s])
          if (!coreach[p]) {
            coreach[p] = 1;
            q.push_back(p);
          }
      }
    }
    for (StateId s = 0; s < n; ++s) {
      if (!alive[s]) continue;
      bool bad = !reach[s] || !coreach[s];
      StateId gs = start.plant_state[s];
      if (!bad && lmg_closed && plant.marked[gs] && !k.marked[s]) bad = true;
      if (!bad) {
        bool forcible_eligible = false;
        for (const auto& [e, t] : k.transitions[s])
          if (alive[t] && table.forcible(e)) {
            forcible_eligible = true;
            break;
          }
        for (EventId e : k.alphabet) {
          if (!plant.defined(gs, e) || k_defined(s, e)) continue;
          if (e == EventTable::tick()) {
            if (!forcible_eligible) {
              bad = true;
              break;
            }
          } else if (table.uncontrollable(e)) {
            bad = true;
            break;
          }
        }
      }
      if (bad) {
        alive[s] = 0;
        shrunk = true;
        any = true;
      }
    }
    if (!alive[k.initial]) break;
  }
  if (changed_out) *changed_out = any;
  return restrict_supervisor(start, alive, table, old_of_new);
}

}  // namespace detail

/// Supremal controllable and Lm(G)-closed sublanguage of Lm(E) cap Lm(G),
/// trim. Alphabets of G and E must be equal.
inline Supervisor supcon_timed(const Generator& plant, const Generator& spec,
                               const EventTable& table, SynthesisLog* log = nullptr,
                               const SynthesisOptions& opts = {}) {
  Supervisor sup = detail::meet_supervisor(spec, plant, table);
  bool changed = false;
  Supervisor out =
      detail::prune_supcon(plant, sup, table, nullptr, &changed, opts.lmg_closed);
  if (log)
    log->note("phase=supcon states_before=" + std::to_string(sup.g.state_count()) +
              " states_after=" + std::to_string(out.g.state_count()));
  return out;
}

/// Associates each state of a generator K with the plant state reached by
/// the strings leading to it, refining K against G where needed. Requires
/// L(K) within L(G).
inline Supervisor attach_plant_map(const Generator& plant, const Generator& k,
                                   const EventTable& table) {
  Supervisor sup;
  sup.g.alphabet = k.alphabet;
  if (k.empty()) return sup;
  if (k.alphabet != plant.alphabet)
    throw std::invalid_argument("attach_plant_map: alphabets differ");

  std::vector<EventId> order = table.name_order(k.alphabet);
  auto key = [&](StateId a, StateId b) {
    return static_cast<std::uint64_t>(a) * plant.state_count() + b;
  };
  std::unordered_map<std::uint64_t, StateId> ids;
  std::vector<std::pair<StateId, StateId>> pairs;
  auto intern = [&](StateId a, StateId b) {
    auto [it, fresh] = ids.try_emplace(key(a, b), static_cast<StateId>(pairs.size()));
    if (fresh) {
      pairs.push_back({a, b});
      sup.g.add_state(k.marked[a]);
      sup.plant_state.push_back(b);
    }
    return it->second;
  };
  sup.g.initial = intern(k.initial, plant.initial);
  for (StateId s = 0; s < static_cast<StateId>(pairs.size()); ++s) {
    auto [sk, sg] = pairs[s];
    for (EventId e : order) {
      StateId tk = k.next(sk, e);
      if (tk == kNoState) continue;
      StateId tg = plant.next(sg, e);
      if (tg == kNoState)
        throw std::invalid_argument("attach_plant_map: K is not within L(G)");
      sup.g.add_transition(s, e, intern(tk, tg));
    }
  }
  return sup;
}

/// One relative-observability pass: removes from K every string s.sigma
/// witnessing a violation of relative observability, i.e. there is a
/// lookalike s' in C-bar with s'.sigma in L(G) but not in K-bar.
///
/// Whether s.sigma violates depends on the lookalike context of s: the
/// set W(s) of (C-state, K-state-or-dead) pairs reachable by strings with
/// the same projection. W is a deterministic function of P(s), so K is
/// first refined by the context observer (states (k, W)); pruning the
/// transition realizing s.sigma in the refined generator then removes
/// exactly the violating strings and their extensions. Trim follows.
/// When responsibility is given, only those events are checked (per-agent
/// relative coobservability).
inline Supervisor suprel_obs_step(const Generator& plant, const Supervisor& ambient,
                                  const Supervisor& k, const std::vector<EventId>& view,
                                  const EventTable& table,
                                  const std::vector<EventId>* responsibility = nullptr,
                                  int* violations_out = nullptr,
                                  std::vector<StateId>* old_of_new = nullptr) {
  if (violations_out) *violations_out = 0;
  auto identity_map = [&]() {
    if (old_of_new) {
      old_of_new->resize(k.g.state_count());
      for (StateId s = 0; s < k.g.state_count(); ++s) (*old_of_new)[s] = s;
    }
  };
  if (k.empty() || ambient.empty()) {
    identity_map();
    return k;
  }
  const Generator& kg = k.g;
  const Generator& cg = ambient.g;
  const std::uint64_t kn = kg.state_count();
  const std::uint64_t dead = kn;  // context has left K-bar

  std::vector<EventId> observable = sorted_intersection(view, kg.alphabet);
  std::vector<EventId> unobservable = sorted_difference(kg.alphabet, observable);
  std::vector<EventId> checked =
      responsibility ? sorted_intersection(*responsibility, kg.alphabet) : kg.alphabet;

  // Lookalike contexts are packed pairs (c, kc).
  auto pack = [&](StateId c, std::uint64_t kc) {
    return static_cast<std::uint64_t>(c) * (kn + 1) + kc;
  };
  auto ctx_c = [&](std::uint64_t ctx) { return static_cast<StateId>(ctx / (kn + 1)); };
  auto ctx_k = [&](std::uint64_t ctx) { return ctx % (kn + 1); };
  auto k_shadow = [&](std::uint64_t kc, EventId e) -> std::uint64_t {
    if (kc == dead) return dead;
    StateId t = kg.next(static_cast<StateId>(kc), e);
    return t == kNoState ? dead : static_cast<std::uint64_t>(t);
  };
  auto closure = [&](std::vector<std::uint64_t> set) {
    std::set<std::uint64_t> in(set.begin(), set.end());
    std::deque<std::uint64_t> queue(set.begin(), set.end());
    while (!queue.empty()) {
      std::uint64_t ctx = queue.front();
      queue.pop_front();
      for (EventId u : unobservable) {
        StateId c2 = cg.next(ctx_c(ctx), u);
        if (c2 == kNoState) continue;
        std::uint64_t nxt = pack(c2, k_shadow(ctx_k(ctx), u));
        if (in.insert(nxt).second) queue.push_back(nxt);
      }
    }
    return std::vector<std::uint64_t>(in.begin(), in.end());
  };

  struct CtxSetHash {
    std::size_t operator()(const std::vector<std::uint64_t>& v) const {
      std::size_t h = 1469598103934665603ull;
      for (std::uint64_t x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
      return h;
    }
  };
  std::unordered_map<std::vector<std::uint64_t>, int, CtxSetHash> ctx_ids;
  std::vector<const std::vector<std::uint64_t>*> ctx_sets;
  // Per context-set, for each event: is a witness context present (plant
  // allows the event, K-bar does not)?
  std::vector<std::vector<char>> ctx_witness;
  auto intern_ctx = [&](std::vector<std::uint64_t> set) {
    auto [it, fresh] = ctx_ids.try_emplace(std::move(set),
                                           static_cast<int>(ctx_sets.size()));
    if (fresh) {
      ctx_sets.push_back(&it->first);
      std::vector<char> witness(table.size(), 0);
      for (std::uint64_t ctx : it->first) {
        StateId gstate = ambient.plant_state[ctx_c(ctx)];
        std::uint64_t kc = ctx_k(ctx);
        for (EventId e : checked) {
          if (!plant.defined(gstate, e)) continue;
          if (kc != dead && kg.next(static_cast<StateId>(kc), e) != kNoState) continue;
          witness[e] = 1;
        }
      }
      ctx_witness.push_back(std::move(witness));
    }
    return it->second;
  };
  // Observable step of the context observer; memoized per (set, event).
  std::unordered_map<std::uint64_t, int> ctx_step;
  auto move_ctx = [&](int id, EventId e) {
    std::uint64_t key = static_cast<std::uint64_t>(id) * table.size() + e;
    auto it = ctx_step.find(key);
    if (it != ctx_step.end()) return it->second;
    std::vector<std::uint64_t> moved;
    for (std::uint64_t ctx : *ctx_sets[id]) {
      StateId c2 = cg.next(ctx_c(ctx), e);
      if (c2 != kNoState) moved.push_back(pack(c2, k_shadow(ctx_k(ctx), e)));
    }
    int next = intern_ctx(closure(std::move(moved)));
    ctx_step[key] = next;
    return next;
  };

  int ctx0 = intern_ctx(closure({pack(cg.initial, kg.initial)}));

  // Refined candidate: (K-state, context id), built in canonical order.
  std::unordered_map<std::uint64_t, StateId> ids;
  std::vector<std::pair<StateId, int>> refined;
  Supervisor out;
  out.g.alphabet = kg.alphabet;
  auto intern = [&](StateId ks, int ctx) {
    std::uint64_t key = static_cast<std::uint64_t>(ks) * 0x100000000ull + ctx;
    auto [it, fresh] = ids.try_emplace(key, static_cast<StateId>(refined.size()));
    if (fresh) {
      refined.push_back({ks, ctx});
      out.g.add_state(kg.marked[ks]);
      out.plant_state.push_back(k.plant_state[ks]);
    }
    return it->second;
  };
  std::vector<EventId> order = table.name_order(kg.alphabet);
  out.g.initial = intern(kg.initial, ctx0);
  int violations = 0;
  for (StateId s = 0; s < static_cast<StateId>(refined.size()); ++s) {
    auto [ks, ctx] = refined[s];
    for (EventId e : order) {
      StateId kt = kg.next(ks, e);
      if (kt == kNoState) continue;
      if (ctx_witness[ctx][e]) {
        ++violations;  // transition realizing the violating s.e: dropped
        continue;
      }
      bool obs = std::binary_search(observable.begin(), observable.end(), e);
      out.g.add_transition(s, e, intern(kt, obs ? move_ctx(ctx, e) : ctx));
    }
  }

  if (violations_out) *violations_out = violations;
  if (violations == 0) {
    identity_map();
    return k;
  }
  std::vector<char> reach = reachable_states(out.g);
  std::vector<char> coreach = coreachable_states(out.g);
  std::vector<char> keep(out.g.state_count(), 0);
  for (StateId s = 0; s < out.g.state_count(); ++s) keep[s] = reach[s] && coreach[s];
  std::vector<StateId> refined_map;
  Supervisor trimmed = detail::restrict_supervisor(out, keep, table, &refined_map);
  if (old_of_new) {
    old_of_new->clear();
    for (StateId s : refined_map) old_of_new->push_back(refined[s].first);
  }
  return trimmed;
}

/// Generator-level wrapper matching the specification surface: plant maps
/// are derived by refining C and K against G.
inline Generator suprel_obs_step(const Generator& plant, const Generator& ambient,
                                 const Generator& k, const std::vector<EventId>& view,
                                 const EventTable& table) {
  Supervisor c = attach_plant_map(plant, ambient, table);
  Supervisor kk = attach_plant_map(plant, k, table);
  return suprel_obs_step(plant, c, kk, view, table).g;
}

/// Result of a supCO / supCCO computation. base is the trimmed meet of E
/// and G the fixpoint started from; origin_state maps each state of sup
/// to the base state it descends from, which identifies exactly which
/// base transitions were pruned along the way.
struct SupSynthesisResult {
  Supervisor sup;
  Supervisor ambient;
  Supervisor base;
  std::vector<StateId> origin_state;
};

namespace detail {

inline Supervisor trimmed_meet(const Generator& plant, const Generator& spec,
                               const EventTable& table) {
  Supervisor meet = meet_supervisor(spec, plant, table);
  if (meet.empty()) return meet;
  std::vector<char> reach = reachable_states(meet.g);
  std::vector<char> coreach = coreachable_states(meet.g);
  std::vector<char> keep(meet.g.state_count(), 0);
  for (StateId s = 0; s < meet.g.state_count(); ++s) keep[s] = reach[s] && coreach[s];
  return restrict_supervisor(meet, keep, table);
}

inline SupSynthesisResult sup_observable_fixpoint(
    const Generator& plant, const Generator& spec,
    const std::vector<std::vector<EventId>>& views,
    const std::vector<std::vector<EventId>>* responsibilities, const EventTable& table,
    const SynthesisOptions& opts, SynthesisLog* log) {
  SupSynthesisResult res;
  res.base = trimmed_meet(plant, spec, table);

  std::vector<StateId> remap0;
  res.sup = prune_supcon(plant, res.base, table, &remap0, nullptr, opts.lmg_closed);
  if (log)
    log->note("phase=supcon states_before=" + std::to_string(res.base.g.state_count()) +
              " states_after=" + std::to_string(res.sup.g.state_count()));
  res.origin_state = remap0;
  res.ambient = (opts.ambient == AmbientPolicy::RawMeet) ? res.base : res.sup;

  if (res.sup.empty()) return res;

  auto compose = [&](std::vector<StateId>& origin, const std::vector<StateId>& remap) {
    std::vector<StateId> next(remap.size());
    for (std::size_t i = 0; i < remap.size(); ++i) next[i] = origin[remap[i]];
    origin = std::move(next);
  };

  int round = 0;
  bool changed = true;
  while (changed && !res.sup.empty()) {
    changed = false;
    ++round;
    for (std::size_t v = 0; v < views.size(); ++v) {
      const std::vector<EventId>* resp =
          responsibilities ? &(*responsibilities)[v] : nullptr;
      const Supervisor& amb =
          (opts.ambient == AmbientPolicy::Iterated) ? res.sup : res.ambient;
      int violations = 0;
      std::vector<StateId> remap;
      Supervisor next =
          suprel_obs_step(plant, amb, res.sup, views[v], table, resp, &violations, &remap);
      if (log)
        log->note("round=" + std::to_string(round) + " phase=observability view=" +
                  std::to_string(v) + " violations=" + std::to_string(violations) +
                  " states_after=" + std::to_string(next.g.state_count()));
      if (violations > 0) {
        changed = true;
        compose(res.origin_state, remap);
        res.sup = std::move(next);
        if (res.sup.empty()) break;
      }
    }
    if (res.sup.empty()) break;
    bool ctrl_changed = false;
    std::vector<StateId> remap;
    Supervisor next =
        prune_supcon(plant, res.sup, table, &remap, &ctrl_changed, opts.lmg_closed);
    if (log)
      log->note("round=" + std::to_string(round) +
                " phase=controllability states_after=" +
                std::to_string(next.g.state_count()));
    if (ctrl_changed) {
      changed = true;
      compose(res.origin_state, remap);
      res.sup = std::move(next);
    }
  }
  return res;
}

}  // namespace detail

/// Supremal controllable, relatively observable and Lm(G)-closed
/// sublanguage of Lm(E) cap Lm(G): alternates the controllability and
/// relative-observability fixpoints until neither changes the language.
inline SupSynthesisResult sup_co(const Generator& plant, const Generator& spec,
                                 const std::vector<EventId>& view, const EventTable& table,
                                 const SynthesisOptions& opts = {},
                                 SynthesisLog* log = nullptr) {
  return detail::sup_observable_fixpoint(plant, spec, {view}, nullptr, table, opts, log);
}

/// Multi-view variant (relative coobservability): per view k only the
/// events in the matching responsibility set are checked.
inline SupSynthesisResult sup_cco(const Generator& plant, const Generator& spec,
                                  const std::vector<std::vector<EventId>>& views,
                                  const std::vector<std::vector<EventId>>& responsibilities,
                                  const EventTable& table, const SynthesisOptions& opts = {},
                                  SynthesisLog* log = nullptr) {
  if (views.size() != responsibilities.size())
    throw std::invalid_argument("sup_cco: one responsibility set per view");
  return detail::sup_observable_fixpoint(plant, spec, views, &responsibilities, table, opts,
                                         log);
}

}  // namespace tdes
