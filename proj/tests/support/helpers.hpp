#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "tdes/event_table.hpp"
#include "tdes/generator.hpp"

namespace tdes::test {

/// Registers a batch of events: "name" -> uncontrollable, "+name" ->
/// controllable, "!name" -> controllable and forcible, "~name" ->
/// uncontrollable and forcible. Bounds default to (0, inf).
inline std::vector<EventId> add_events(EventTable& table,
                                       const std::vector<std::string>& names) {
  std::vector<EventId> ids;
  for (std::string n : names) {
    bool ctrl = false, forc = false;
    if (!n.empty() && n[0] == '+') {
      ctrl = true;
      n = n.substr(1);
    } else if (!n.empty() && n[0] == '!') {
      ctrl = forc = true;
      n = n.substr(1);
    } else if (!n.empty() && n[0] == '~') {
      forc = true;
      n = n.substr(1);
    }
    ids.push_back(table.add(n, ctrl, forc, 0, kInfinity));
  }
  return ids;
}

struct Trans {
  StateId src;
  EventId event;
  StateId dst;
};

inline Generator make_generator(std::vector<EventId> alphabet, int states, StateId initial,
                                std::vector<StateId> marked_states,
                                std::vector<Trans> transitions) {
  std::sort(alphabet.begin(), alphabet.end());
  Generator g;
  g.alphabet = std::move(alphabet);
  for (int i = 0; i < states; ++i) g.add_state(false);
  for (StateId m : marked_states) g.marked[m] = 1;
  g.initial = initial;
  for (const auto& t : transitions) g.add_transition(t.src, t.event, t.dst);
  return g;
}

using Word = std::vector<EventId>;

/// Brute-force closed/marked language up to a length bound.
inline void enumerate_language(const Generator& g, int maxlen, std::set<Word>* closed,
                               std::set<Word>* marked) {
  if (g.empty()) return;
  struct Item {
    StateId s;
    Word w;
  };
  std::vector<Item> frontier{{g.initial, {}}};
  while (!frontier.empty()) {
    std::vector<Item> next;
    for (const auto& it : frontier) {
      if (closed) closed->insert(it.w);
      if (marked && g.marked[it.s]) marked->insert(it.w);
      if (static_cast<int>(it.w.size()) == maxlen) continue;
      for (const auto& [e, t] : g.transitions[it.s]) {
        Word w2 = it.w;
        w2.push_back(e);
        next.push_back({t, std::move(w2)});
      }
    }
    frontier = std::move(next);
  }
}

inline std::set<Word> closed_language(const Generator& g, int maxlen) {
  std::set<Word> out;
  enumerate_language(g, maxlen, &out, nullptr);
  return out;
}

inline std::set<Word> marked_language(const Generator& g, int maxlen) {
  std::set<Word> out;
  enumerate_language(g, maxlen, nullptr, &out);
  return out;
}

/// Random generator over a given alphabet: every (state, event) slot is
/// filled with probability density, targets uniform; marked states chosen
/// with probability mark_p (the initial state is forced marked when none
/// got chosen so languages stay nonempty more often).
inline Generator random_generator(std::mt19937& rng, const std::vector<EventId>& alphabet,
                                  int max_states, double density = 0.45,
                                  double mark_p = 0.4) {
  std::uniform_int_distribution<int> nstates(1, max_states);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  int n = nstates(rng);
  std::uniform_int_distribution<int> pick(0, n - 1);
  Generator g;
  g.alphabet = alphabet;
  for (int i = 0; i < n; ++i) g.add_state(coin(rng) < mark_p);
  g.initial = 0;
  bool any_marked = false;
  for (int i = 0; i < n; ++i) any_marked = any_marked || g.marked[i];
  if (!any_marked) g.marked[pick(rng)] = 1;
  for (StateId s = 0; s < n; ++s)
    for (EventId e : alphabet)
      if (coin(rng) < density) g.add_transition(s, e, pick(rng));
  return g;
}

}  // namespace tdes::test
