#pragma once

#include <string>
#include <vector>

#include "tdes/ttg.hpp"

namespace tdes {

/// A communication channel carrying event sigma from a sender agent to a
/// receiver agent, with bounded (d ticks) or unbounded delay. The channel
/// introduces three signal events: sigma' (received, acknowledgement
/// sent), sigma'' (acknowledgement received) and, for bounded delay,
/// sigma_tau (timeout). sigma' and sigma'' are uncontrollable; sigma_tau
/// is uncontrollable but forcible.
struct ChannelDescriptor {
  std::string sender;
  std::string receiver;
  EventId event = kNoEvent;
  bool bounded = false;
  int delay = 0;  // d, bounded only
  EventId received = kNoEvent;  // sigma'
  EventId acked = kNoEvent;     // sigma''
  EventId timeout = kNoEvent;   // sigma_tau, bounded only
};

struct ChannelModel {
  ChannelDescriptor desc;
  Generator plant;  // channel TDES, a plant component
  Generator spec;   // delay requirement, a temporal specification
};

/// Registers the signal events for a channel. Bounded: sigma' and
/// sigma'' in (0, d), sigma_tau at exactly (d, d). Unbounded: sigma' and
/// sigma'' in (0, infinity).
inline ChannelDescriptor declare_channel(EventTable& table, const std::string& sender,
                                         const std::string& receiver, EventId event,
                                         bool bounded, int delay = 0) {
  ChannelDescriptor desc;
  desc.sender = sender;
  desc.receiver = receiver;
  desc.event = event;
  desc.bounded = bounded;
  desc.delay = delay;
  if (bounded && delay < 0)
    throw std::invalid_argument("channel delay bound must be non-negative");
  const std::string base = table.name(event);
  if (bounded) {
    desc.received = table.add(base + "'", false, false, 0, delay);
    desc.acked = table.add(base + "''", false, false, 0, delay);
    desc.timeout = table.add(base + "_tau", false, true, delay, delay);
  } else {
    desc.received = table.add(base + "'", false, false, 0, kInfinity);
    desc.acked = table.add(base + "''", false, false, 0, kInfinity);
  }
  return desc;
}

/// Builds the channel TDES and its delay specification. The channel is a
/// three-activity cycle idle -sigma-> sent -sigma'-> acked -sigma''->
/// idle, with timeout transitions from both busy activities back to idle
/// in the bounded case; the channel does not time-constrain sigma itself.
/// The bounded delay spec counts ticks between sigma and sigma'' and
/// forbids more than d; the unbounded spec only forces eventual
/// completion through marking.
inline ChannelModel make_channel(const ChannelDescriptor& desc, const EventTable& table,
                                 MarkingRule marking = MarkingRule::ActivityMarked) {
  ChannelModel model;
  model.desc = desc;

  ATGSpec atg;
  atg.name = "channel";
  atg.activity_count = 3;
  atg.initial = 0;
  atg.marked = {1, 0, 0};
  atg.transitions.resize(3);
  atg.transitions[0].push_back({desc.event, 1});
  atg.transitions[1].push_back({desc.received, 2});
  atg.transitions[2].push_back({desc.acked, 0});
  atg.events = {desc.event, desc.received, desc.acked};
  if (desc.bounded) {
    atg.transitions[1].push_back({desc.timeout, 0});
    atg.transitions[2].push_back({desc.timeout, 0});
    atg.events.push_back(desc.timeout);
  }
  std::sort(atg.events.begin(), atg.events.end());
  for (auto& row : atg.transitions) std::sort(row.begin(), row.end());
  // The sender times sigma; the channel merely observes it.
  atg.bounds_override[desc.event] = {0, kInfinity};
  model.plant = build_ttg(atg, table, marking);

  Generator spec;
  if (desc.bounded) {
    spec.alphabet = {EventTable::tick(), desc.event, desc.acked, desc.timeout};
    std::sort(spec.alphabet.begin(), spec.alphabet.end());
    StateId idle = spec.add_state(true);
    spec.initial = idle;
    std::vector<StateId> counts;
    for (int i = 0; i <= desc.delay; ++i) counts.push_back(spec.add_state(false));
    spec.add_transition(idle, EventTable::tick(), idle);
    spec.add_transition(idle, desc.event, counts[0]);
    for (int i = 0; i <= desc.delay; ++i) {
      if (i < desc.delay) spec.add_transition(counts[i], EventTable::tick(), counts[i + 1]);
      spec.add_transition(counts[i], desc.acked, idle);
      // A timeout abandons the attempt and restarts the count with the
      // channel, keeping the d-tick budget per transmission.
      spec.add_transition(counts[i], desc.timeout, idle);
    }
  } else {
    spec.alphabet = {desc.event, desc.acked};
    std::sort(spec.alphabet.begin(), spec.alphabet.end());
    StateId idle = spec.add_state(true);
    StateId busy = spec.add_state(false);
    spec.initial = idle;
    spec.add_transition(idle, desc.event, busy);
    spec.add_transition(busy, desc.acked, idle);
  }
  model.spec = canonicalize(spec, table);
  return model;
}

/// Delayed plant and specification: the channels join the plant as
/// components (sigma stays a single event shared with its sender) and the
/// delay requirements join the specification by synchronous product.
struct AugmentResult {
  Generator plant;  // G~
  Generator spec;   // E~ (over the union of the operands; lift before use)
  std::vector<std::string> warnings;
};

inline AugmentResult augment(const std::vector<Generator>& plant_components,
                             const std::vector<ChannelModel>& channels,
                             const Generator& base_spec, const EventTable& table) {
  AugmentResult res;
  std::vector<Generator> comps = plant_components;
  for (const auto& ch : channels) comps.push_back(ch.plant);
  res.plant = comp(comps, table, &res.warnings);
  res.spec = base_spec;
  for (const auto& ch : channels) res.spec = sync_product(res.spec, ch.spec, table);
  return res;
}

/// Per-agent observation and responsibility data in the delayed system.
struct AgentViewConfig {
  std::string agent;
  std::vector<EventId> alphabet;     // Sigma_k
  std::vector<EventId> observable;   // Sigma~_{o,k}
  std::vector<EventId> forcible;     // Sigma~_{for,k}
  std::vector<EventId> prohibitible; // Sigma~_{hib,k}
};

/// Observable set of agent k in the delayed system: base observables
/// minus the events communicated to k through channels, plus the
/// sender-side signals of k's outgoing channels and the receiver-side
/// signals of its incoming ones.
inline AgentViewConfig agent_view(const std::string& agent,
                                  const std::vector<EventId>& agent_alphabet,
                                  const std::vector<EventId>& base_observable,
                                  const std::vector<ChannelDescriptor>& channels,
                                  const EventTable& table) {
  AgentViewConfig cfg;
  cfg.agent = agent;
  cfg.alphabet = agent_alphabet;

  std::vector<EventId> communicated_in;  // Sigma_com,k
  std::vector<EventId> extra;
  for (const auto& ch : channels) {
    if (ch.receiver == agent) {
      communicated_in.push_back(ch.event);
      extra.push_back(ch.received);
    }
    if (ch.sender == agent) {
      extra.push_back(ch.event);
      extra.push_back(ch.acked);
      if (ch.bounded) extra.push_back(ch.timeout);
    }
  }
  std::sort(communicated_in.begin(), communicated_in.end());
  std::sort(extra.begin(), extra.end());
  cfg.observable =
      sorted_union(sorted_difference(base_observable, communicated_in), extra);

  for (EventId e : agent_alphabet) {
    if (table.forcible(e)) cfg.forcible.push_back(e);
    if (table.prohibitible(e)) cfg.prohibitible.push_back(e);
  }
  for (const auto& ch : channels)
    if (ch.sender == agent && ch.bounded) cfg.forcible.push_back(ch.timeout);
  std::sort(cfg.forcible.begin(), cfg.forcible.end());
  std::sort(cfg.prohibitible.begin(), cfg.prohibitible.end());
  return cfg;
}

}  // namespace tdes
