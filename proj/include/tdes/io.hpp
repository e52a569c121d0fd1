#pragma once

#include <ostream>
#include <sstream>
#include <string>

#include "tdes/generator.hpp"
#include "tdes/localization.hpp"

namespace tdes {

/// Line-oriented text form of a generator, mirroring the project-file
/// grammar plus a stats trailer. State names are canonical indices.
inline void write_generator(std::ostream& out, const Generator& g,
                            const std::string& name, const EventTable& table) {
  out << "automaton " << name << "\n";
  for (StateId s = 0; s < g.state_count(); ++s) {
    out << "state s" << s;
    if (g.marked[s]) out << " marked";
    if (s == g.initial) out << " initial";
    out << "\n";
  }
  for (StateId s = 0; s < g.state_count(); ++s)
    for (EventId e : table.name_order(g.alphabet)) {
      StateId t = g.next(s, e);
      if (t != kNoState) out << "trans s" << s << " " << table.name(e) << " s" << t << "\n";
    }
  out << "# stats states " << g.state_count() << " transitions " << g.transition_count()
      << "\n";
}

inline std::string generator_text(const Generator& g, const std::string& name,
                                  const EventTable& table) {
  std::ostringstream out;
  write_generator(out, g, name, table);
  return out.str();
}

/// Local automata additionally carry their role, owner event and
/// communication set manifest.
inline void write_local(std::ostream& out, const LocalAutomaton& loc,
                        const std::string& name, const EventTable& table) {
  out << "local " << name << " " << loc.role_name() << " " << table.name(loc.owner) << "\n";
  out << "communicates";
  for (EventId e : table.name_order(loc.sigma_com)) out << " " << table.name(e);
  out << "\n";
  write_generator(out, loc.g, name, table);
}

inline std::string local_text(const LocalAutomaton& loc, const std::string& name,
                              const EventTable& table) {
  std::ostringstream out;
  write_local(out, loc, name, table);
  return out.str();
}

}  // namespace tdes
