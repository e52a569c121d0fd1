#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tdes/channels.hpp"
#include "tdes/generator.hpp"
#include "tdes/ttg.hpp"

namespace tdes {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

struct ProjectEvent {
  std::string name;
  bool controllable = false;
  bool forcible = false;
  int lower = 0;
  int upper = kInfinity;
};

struct ProjectAutomaton {
  std::string name;
  std::vector<std::string> states;
  std::vector<char> marked;
  int initial = -1;
  // (src, event name, dst), indices into states
  std::vector<std::tuple<int, std::string, int>> transitions;
};

struct ProjectView {
  std::string name;
  std::vector<std::string> unobservable;
};

struct ProjectChannel {
  std::string sender;
  std::string event;
  std::string receiver;
  bool bounded = false;
  int delay = 0;
};

/// Parsed project file: event declarations, agent activity models,
/// specification generators, observation views, channel declarations and
/// pipeline options.
struct ProjectConfig {
  std::vector<ProjectEvent> events;
  std::vector<ProjectAutomaton> agents;
  std::vector<ProjectAutomaton> specs;
  std::vector<ProjectView> views;
  std::vector<ProjectChannel> channels;
  std::map<std::string, std::string> options;
};

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline int parse_bound(const std::string& tok, int line) {
  if (tok == "inf") return kInfinity;
  try {
    std::size_t pos = 0;
    int v = std::stoi(tok, &pos);
    if (pos != tok.size() || v < 0) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "bad bound: " + tok);
  }
}

}  // namespace detail

inline ProjectConfig parse_project(const std::string& text) {
  ProjectConfig cfg;
  ProjectAutomaton* block = nullptr;
  std::map<std::string, int> block_states;
  std::map<std::string, int> event_names;
  std::map<std::string, int> agent_names;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<std::string> tok = detail::tokenize(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    const std::string& kw = tok[0];

    if (kw == "event") {
      if (tok.size() != 6) throw ParseError(lineno, "expected: event <name> ctrl|unctrl forcible|nonforcible <lower> <upper|inf>");
      ProjectEvent ev;
      ev.name = tok[1];
      if (ev.name == "tick") throw ParseError(lineno, "event name \"tick\" is reserved");
      if (event_names.count(ev.name))
        throw ParseError(lineno, "duplicate event name: " + ev.name);
      if (tok[2] == "ctrl") ev.controllable = true;
      else if (tok[2] == "unctrl") ev.controllable = false;
      else throw ParseError(lineno, "expected ctrl or unctrl, got " + tok[2]);
      if (tok[3] == "forcible") ev.forcible = true;
      else if (tok[3] == "nonforcible") ev.forcible = false;
      else throw ParseError(lineno, "expected forcible or nonforcible, got " + tok[3]);
      ev.lower = detail::parse_bound(tok[4], lineno);
      if (ev.lower == kInfinity) throw ParseError(lineno, "lower bound cannot be inf");
      ev.upper = detail::parse_bound(tok[5], lineno);
      if (!bound_le(ev.lower, ev.upper))
        throw ParseError(lineno, "lower bound exceeds upper bound");
      event_names[ev.name] = static_cast<int>(cfg.events.size());
      cfg.events.push_back(ev);
      block = nullptr;
    } else if (kw == "agent" || kw == "spec") {
      if (tok.size() != 2) throw ParseError(lineno, "expected: " + kw + " <name>");
      auto& list = (kw == "agent") ? cfg.agents : cfg.specs;
      if (kw == "agent") {
        if (agent_names.count(tok[1]))
          throw ParseError(lineno, "duplicate agent name: " + tok[1]);
        agent_names[tok[1]] = static_cast<int>(list.size());
      }
      list.push_back(ProjectAutomaton{});
      block = &list.back();
      block->name = tok[1];
      block_states.clear();
    } else if (kw == "state") {
      if (!block) throw ParseError(lineno, "state outside agent/spec block");
      if (tok.size() < 2 || tok.size() > 4)
        throw ParseError(lineno, "expected: state <name> [marked] [initial]");
      if (block_states.count(tok[1]))
        throw ParseError(lineno, "duplicate state name: " + tok[1]);
      int id = static_cast<int>(block->states.size());
      block_states[tok[1]] = id;
      block->states.push_back(tok[1]);
      block->marked.push_back(0);
      for (std::size_t i = 2; i < tok.size(); ++i) {
        if (tok[i] == "marked") block->marked[id] = 1;
        else if (tok[i] == "initial") {
          if (block->initial >= 0) throw ParseError(lineno, "second initial state");
          block->initial = id;
        } else throw ParseError(lineno, "unknown state flag: " + tok[i]);
      }
    } else if (kw == "trans") {
      if (!block) throw ParseError(lineno, "trans outside agent/spec block");
      if (tok.size() != 4) throw ParseError(lineno, "expected: trans <src> <event> <dst>");
      auto src = block_states.find(tok[1]);
      auto dst = block_states.find(tok[3]);
      if (src == block_states.end()) throw ParseError(lineno, "unknown state: " + tok[1]);
      if (dst == block_states.end()) throw ParseError(lineno, "unknown state: " + tok[3]);
      if (tok[2] != "tick" && !event_names.count(tok[2]))
        throw ParseError(lineno, "unknown event: " + tok[2]);
      block->transitions.push_back({src->second, tok[2], dst->second});
    } else if (kw == "view") {
      if (tok.size() < 3 || tok[2] != "unobservable")
        throw ParseError(lineno, "expected: view <name> unobservable <event>*");
      ProjectView v;
      v.name = tok[1];
      for (std::size_t i = 3; i < tok.size(); ++i) {
        if (tok[i] != "tick" && !event_names.count(tok[i]))
          throw ParseError(lineno, "unknown event: " + tok[i]);
        v.unobservable.push_back(tok[i]);
      }
      cfg.views.push_back(std::move(v));
      block = nullptr;
    } else if (kw == "channel") {
      if (tok.size() != 5 && tok.size() != 6)
        throw ParseError(lineno, "expected: channel <sender> <event> <receiver> bounded <d> | unbounded");
      ProjectChannel ch;
      ch.sender = tok[1];
      ch.event = tok[2];
      ch.receiver = tok[3];
      if (!event_names.count(ch.event))
        throw ParseError(lineno, "unknown event: " + ch.event);
      if (tok[4] == "unbounded" && tok.size() == 5) {
        ch.bounded = false;
      } else if (tok[4] == "bounded" && tok.size() == 6) {
        ch.bounded = true;
        ch.delay = detail::parse_bound(tok[5], lineno);
        if (ch.delay == kInfinity) throw ParseError(lineno, "bounded delay cannot be inf");
      } else {
        throw ParseError(lineno, "expected bounded <d> or unbounded");
      }
      cfg.channels.push_back(std::move(ch));
      block = nullptr;
    } else if (kw == "option") {
      if (tok.size() != 3) throw ParseError(lineno, "expected: option <key> <value>");
      cfg.options[tok[1]] = tok[2];
      block = nullptr;
    } else {
      throw ParseError(lineno, "unknown keyword: " + kw);
    }
  }

  for (const auto& a : cfg.agents)
    if (a.initial < 0) throw ParseError(lineno, "agent " + a.name + " has no initial state");
  for (const auto& s : cfg.specs)
    if (s.initial < 0) throw ParseError(lineno, "spec " + s.name + " has no initial state");
  for (const auto& ch : cfg.channels) {
    bool sender_ok = false, receiver_ok = false;
    for (const auto& a : cfg.agents) {
      sender_ok = sender_ok || a.name == ch.sender;
      receiver_ok = receiver_ok || a.name == ch.receiver;
    }
    if (!sender_ok) throw ParseError(lineno, "unknown channel sender: " + ch.sender);
    if (!receiver_ok) throw ParseError(lineno, "unknown channel receiver: " + ch.receiver);
  }
  return cfg;
}

inline std::string bound_text(int b) {
  return b == kInfinity ? "inf" : std::to_string(b);
}

/// Canonical text form; parse followed by serialize is a fixpoint.
inline std::string serialize_project(const ProjectConfig& cfg) {
  std::ostringstream out;
  for (const auto& ev : cfg.events)
    out << "event " << ev.name << " " << (ev.controllable ? "ctrl" : "unctrl") << " "
        << (ev.forcible ? "forcible" : "nonforcible") << " " << bound_text(ev.lower) << " "
        << bound_text(ev.upper) << "\n";
  auto write_block = [&](const char* kw, const ProjectAutomaton& a) {
    out << "\n" << kw << " " << a.name << "\n";
    for (std::size_t s = 0; s < a.states.size(); ++s) {
      out << "state " << a.states[s];
      if (a.marked[s]) out << " marked";
      if (static_cast<int>(s) == a.initial) out << " initial";
      out << "\n";
    }
    auto sorted = a.transitions;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [src, ev, dst] : sorted)
      out << "trans " << a.states[src] << " " << ev << " " << a.states[dst] << "\n";
  };
  for (const auto& a : cfg.agents) write_block("agent", a);
  for (const auto& s : cfg.specs) write_block("spec", s);
  if (!cfg.views.empty()) out << "\n";
  for (const auto& v : cfg.views) {
    out << "view " << v.name << " unobservable";
    auto sorted = v.unobservable;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& e : sorted) out << " " << e;
    out << "\n";
  }
  if (!cfg.channels.empty()) out << "\n";
  for (const auto& ch : cfg.channels) {
    out << "channel " << ch.sender << " " << ch.event << " " << ch.receiver;
    if (ch.bounded) out << " bounded " << ch.delay;
    else out << " unbounded";
    out << "\n";
  }
  if (!cfg.options.empty()) out << "\n";
  for (const auto& [k, v] : cfg.options) out << "option " << k << " " << v << "\n";
  return out.str();
}

/// Elaborated project: event table populated (channel signal events
/// included), agent activity models, specification generators and views
/// resolved to event ids.
struct Project {
  EventTable table;
  std::vector<ATGSpec> agents;
  std::vector<std::vector<EventId>> agent_alphabets;
  std::vector<std::string> agent_names;
  std::vector<Generator> specs;
  std::vector<std::string> spec_names;
  std::vector<std::pair<std::string, std::vector<EventId>>> views;  // observable sets
  std::vector<ChannelDescriptor> channels;
  std::map<std::string, std::string> options;
  std::vector<EventId> declared_events;  // tick plus project events, sorted
};

inline Project elaborate(const ProjectConfig& cfg) {
  Project proj;
  for (const auto& ev : cfg.events)
    proj.table.add(ev.name, ev.controllable, ev.forcible, ev.lower, ev.upper);
  proj.declared_events.resize(proj.table.size());
  for (int i = 0; i < proj.table.size(); ++i) proj.declared_events[i] = i;

  for (const auto& a : cfg.agents) {
    ATGSpec atg;
    atg.name = a.name;
    atg.activity_count = static_cast<int>(a.states.size());
    atg.initial = a.initial;
    atg.marked.assign(a.marked.begin(), a.marked.end());
    atg.transitions.resize(a.states.size());
    std::vector<EventId> events;
    for (const auto& [src, ev, dst] : a.transitions) {
      if (ev == "tick")
        throw std::invalid_argument("agent " + a.name + ": tick is not an activity event");
      EventId e = proj.table.require(ev);
      if (atg.next(src, e) != kNoState)
        throw std::invalid_argument("agent " + a.name + ": nondeterministic on " + ev);
      atg.transitions[src].push_back({e, dst});
      events.push_back(e);
    }
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());
    atg.events = events;
    for (auto& row : atg.transitions) std::sort(row.begin(), row.end());
    proj.agents.push_back(std::move(atg));
    proj.agent_alphabets.push_back(events);
    proj.agent_names.push_back(a.name);
  }

  for (const auto& s : cfg.specs) {
    Generator g;
    std::vector<EventId> events;
    for (const auto& [src, ev, dst] : s.transitions) events.push_back(proj.table.require(ev));
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());
    g.alphabet = events;
    for (std::size_t i = 0; i < s.states.size(); ++i) g.add_state(s.marked[i]);
    g.initial = s.initial;
    for (const auto& [src, ev, dst] : s.transitions)
      g.add_transition(src, proj.table.require(ev), dst);
    proj.specs.push_back(canonicalize(g, proj.table));
    proj.spec_names.push_back(s.name);
  }

  for (const auto& ch : cfg.channels) {
    EventId e = proj.table.require(ch.event);
    // The channel event must belong to the sender.
    bool owned = false;
    for (std::size_t i = 0; i < proj.agent_names.size(); ++i)
      if (proj.agent_names[i] == ch.sender)
        owned = std::binary_search(proj.agent_alphabets[i].begin(),
                                   proj.agent_alphabets[i].end(), e);
    if (!owned)
      throw std::invalid_argument("channel event " + ch.event + " is not an event of " +
                                  ch.sender);
    proj.channels.push_back(
        declare_channel(proj.table, ch.sender, ch.receiver, e, ch.bounded, ch.delay));
  }

  for (const auto& v : cfg.views) {
    std::vector<EventId> unobs;
    for (const auto& name : v.unobservable) unobs.push_back(proj.table.require(name));
    std::sort(unobs.begin(), unobs.end());
    proj.views.push_back({v.name, sorted_difference(proj.declared_events, unobs)});
  }

  proj.options = cfg.options;
  return proj;
}

}  // namespace tdes
