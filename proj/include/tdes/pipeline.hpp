#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tdes/channels.hpp"
#include "tdes/io.hpp"
#include "tdes/localization.hpp"
#include "tdes/observer.hpp"
#include "tdes/project.hpp"
#include "tdes/synthesis.hpp"
#include "tdes/verify.hpp"

namespace tdes {

struct EmptySupervisorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EquivalenceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PipelineOptions {
  AmbientPolicy ambient = AmbientPolicy::FixedSupcon;
  MarkingRule marking = MarkingRule::ActivityMarked;
};

inline PipelineOptions options_from_project(const Project& proj) {
  PipelineOptions opts;
  auto it = proj.options.find("ambient");
  if (it != proj.options.end()) {
    if (it->second == "fixed") opts.ambient = AmbientPolicy::FixedSupcon;
    else if (it->second == "iterated") opts.ambient = AmbientPolicy::Iterated;
    else throw std::invalid_argument("unknown ambient policy: " + it->second);
  }
  it = proj.options.find("marking");
  if (it != proj.options.end()) {
    if (it->second == "activity") opts.marking = MarkingRule::ActivityMarked;
    else if (it->second == "default-timers") opts.marking = MarkingRule::DefaultTimers;
    else throw std::invalid_argument("unknown marking rule: " + it->second);
  }
  return opts;
}

/// One localization run: the whole system for the monolithic case, one
/// per agent in the decentralized case.
struct LocalizationUnit {
  std::string agent;  // empty for the monolithic pipeline
  std::vector<EventId> view;
  std::vector<EventId> forcible;
  std::vector<EventId> prohibitible;
  UncertaintyAutomaton supo;
  std::vector<LocalAutomaton> locals;
  std::vector<Lemma1Violation> lemma1;
};

struct VerdictEntry {
  std::string name;
  Verdict verdict;
};

struct PipelineResult {
  std::vector<Generator> agent_ttgs;
  std::vector<ChannelModel> channels;
  std::vector<AgentViewConfig> agent_views;  // decentralized only
  Generator plant;                           // G, or the delayed plant
  Generator spec;                            // lifted to the plant alphabet
  SupSynthesisResult synth;
  std::vector<LocalizationUnit> units;
  std::vector<VerdictEntry> verdicts;
  std::vector<std::string> warnings;
  SynthesisLog log;

  bool all_verdicts_pass() const {
    for (const auto& v : verdicts)
      if (!v.verdict.pass) return false;
    return true;
  }
};

enum class PipelineStage { Build, Channels, Synthesize, Localize, Verify };

namespace detail {

inline Generator universal_spec(const std::vector<EventId>& alphabet,
                                const EventTable& table) {
  Generator g;
  g.alphabet = alphabet;
  StateId s = g.add_state(true);
  g.initial = s;
  for (EventId e : alphabet) g.add_transition(s, e, s);
  return canonicalize(g, table);
}

}  // namespace detail

inline PipelineResult run_pipeline(const Project& proj, const PipelineOptions& opts,
                                   PipelineStage stage) {
  PipelineResult res;
  if (proj.agents.empty()) throw std::invalid_argument("project declares no agents");

  for (const auto& atg : proj.agents)
    res.agent_ttgs.push_back(build_ttg(atg, proj.table, opts.marking));
  for (const auto& ch : proj.channels)
    res.channels.push_back(make_channel(ch, proj.table, opts.marking));

  Generator base_spec;
  if (proj.specs.empty()) {
    base_spec = detail::universal_spec({EventTable::tick()}, proj.table);
  } else {
    base_spec = proj.specs[0];
    for (std::size_t i = 1; i < proj.specs.size(); ++i)
      base_spec = sync_product(base_spec, proj.specs[i], proj.table);
  }

  if (res.channels.empty()) {
    res.plant = comp(res.agent_ttgs, proj.table, &res.warnings);
    res.spec = selfloop_lift(base_spec, res.plant.alphabet, proj.table);
  } else {
    std::vector<ChannelModel> models = res.channels;
    AugmentResult aug = augment(res.agent_ttgs, models, base_spec, proj.table);
    res.plant = std::move(aug.plant);
    res.warnings = std::move(aug.warnings);
    res.spec = selfloop_lift(aug.spec, res.plant.alphabet, proj.table);
  }
  if (stage == PipelineStage::Build || stage == PipelineStage::Channels) return res;

  if (proj.views.empty()) throw std::invalid_argument("project declares no view");
  const std::vector<EventId>& base_observable = proj.views[0].second;

  std::vector<std::vector<EventId>> views;
  std::vector<std::vector<EventId>> responsibilities;
  if (res.channels.empty()) {
    views.push_back(sorted_intersection(base_observable, res.plant.alphabet));
    res.synth = sup_co(res.plant, res.spec, views[0], proj.table, {opts.ambient}, &res.log);
  } else {
    std::vector<ChannelDescriptor> descs;
    for (const auto& m : res.channels) descs.push_back(m.desc);
    for (std::size_t k = 0; k < proj.agents.size(); ++k) {
      AgentViewConfig cfg = agent_view(proj.agent_names[k], proj.agent_alphabets[k],
                                       base_observable, descs, proj.table);
      views.push_back(sorted_intersection(cfg.observable, res.plant.alphabet));
      // Responsibility: the agent's own events; tick is included so the
      // synthesis keeps preemption decisions consistent under every view.
      responsibilities.push_back(
          sorted_union(cfg.alphabet, std::vector<EventId>{EventTable::tick()}));
      res.agent_views.push_back(std::move(cfg));
    }
    res.synth =
        sup_cco(res.plant, res.spec, views, responsibilities, proj.table, {opts.ambient},
                &res.log);
  }

  if (res.synth.sup.empty()) {
    std::string hint = "no supervisor: the specification admits no controllable"
                       " and observable behavior";
    if (!res.channels.empty())
      hint += "; the delay requirements may be too strong - weaken them by adjusting"
              " delay bounds or dropping unbounded channels";
    throw EmptySupervisorError(hint);
  }
  if (stage == PipelineStage::Synthesize) return res;

  const Supervisor& sup = res.synth.sup;
  if (res.channels.empty()) {
    LocalizationUnit unit;
    unit.view = views[0];
    for (EventId e : sup.g.alphabet) {
      if (proj.table.forcible(e)) unit.forcible.push_back(e);
      if (proj.table.prohibitible(e)) unit.prohibitible.push_back(e);
    }
    unit.supo = build_supo(sup.g, unit.view, proj.table);
    annotate_flags(unit.supo, res.plant, sup, proj.table);
    unit.lemma1 = check_lemma1(unit.supo, sup, res.plant, proj.table);
    unit.locals = localize_all(unit.supo, unit.forcible, unit.prohibitible, proj.table);
    res.units.push_back(std::move(unit));
  } else {
    for (std::size_t k = 0; k < proj.agents.size(); ++k) {
      LocalizationUnit unit;
      unit.agent = proj.agent_names[k];
      unit.view = views[k];
      unit.forcible = sorted_intersection(res.agent_views[k].forcible, sup.g.alphabet);
      unit.prohibitible =
          sorted_intersection(res.agent_views[k].prohibitible, sup.g.alphabet);
      unit.supo = build_supo(sup.g, unit.view, proj.table);
      annotate_flags(unit.supo, res.plant, sup, proj.table);
      std::vector<EventId> lemma_events =
          sorted_union(unit.prohibitible, std::vector<EventId>{EventTable::tick()});
      unit.lemma1 =
          check_lemma1(unit.supo, sup, res.plant, proj.table, &lemma_events);
      unit.locals = localize_all(unit.supo, unit.forcible, unit.prohibitible, proj.table);
      res.units.push_back(std::move(unit));
    }
  }

  // Control equivalence (Theorems 1 and 2) is checked before returning.
  std::vector<LocalAutomaton> all_locals;
  for (const auto& unit : res.units)
    all_locals.insert(all_locals.end(), unit.locals.begin(), unit.locals.end());
  Verdict equiv = check_equivalence(res.plant, all_locals, sup.g, proj.table);
  if (stage == PipelineStage::Localize) {
    if (!equiv.pass)
      throw EquivalenceFailure("control equivalence failed: " + equiv.reason + " at " +
                               format_word(equiv.counterexample, proj.table));
    return res;
  }

  // Full verdict suite.
  res.verdicts.push_back({"controllable", check_controllable(res.plant, sup.g, proj.table)});
  for (std::size_t v = 0; v < views.size(); ++v) {
    const std::vector<EventId>* resp =
        res.channels.empty() ? nullptr : &responsibilities[v];
    std::string name = res.channels.empty()
                           ? std::string("relatively-observable")
                           : "relatively-coobservable[" + proj.agent_names[v] + "]";
    res.verdicts.push_back(
        {name, check_rel_observable(res.plant, res.synth.ambient.g, sup.g, views[v],
                                    proj.table, resp)});
  }
  for (const auto& unit : res.units) {
    std::string prefix = unit.agent.empty() ? "" : unit.agent + ".";
    Verdict lem;
    if (!unit.lemma1.empty())
      lem = Verdict::fail({unit.lemma1[0].event},
                          "uncertainty set " + std::to_string(unit.lemma1[0].uncertainty_set) +
                              " mixes enabled and disabled");
    res.verdicts.push_back({prefix + "lemma1", lem});
    for (const auto& loc : unit.locals) {
      std::string name = prefix + "local." + loc.role_name() + "." +
                         proj.table.name(loc.owner);
      res.verdicts.push_back(
          {name, check_local(loc, sup.g, res.plant, unit.view, proj.table)});
    }
  }
  res.verdicts.push_back({"equivalence", equiv});
  return res;
}

/// State-count report plus the distributed-architecture table.
inline std::string report_text(const Project& proj, const PipelineResult& res) {
  std::ostringstream out;
  const EventTable& table = proj.table;
  for (std::size_t i = 0; i < res.agent_ttgs.size(); ++i)
    out << proj.agent_names[i] << ": " << res.agent_ttgs[i].state_count() << " states, "
        << res.agent_ttgs[i].transition_count() << " transitions\n";
  for (const auto& ch : res.channels) {
    std::string label = (ch.desc.bounded ? "BCH(" : "CH(") + ch.desc.sender + "," +
                        table.name(ch.desc.event) + "," + ch.desc.receiver + ")";
    out << label << ": " << ch.plant.state_count() << " states, spec "
        << ch.spec.state_count() << " states\n";
  }
  out << "PLANT: " << res.plant.state_count() << " states, "
      << res.plant.transition_count() << " transitions\n";
  if (!res.synth.sup.empty())
    out << "SUP: " << res.synth.sup.g.state_count() << " states, "
        << res.synth.sup.g.transition_count() << " transitions\n";
  for (const auto& unit : res.units) {
    std::string who = unit.agent.empty() ? "system" : unit.agent;
    out << "SUPO[" << who << "]: " << unit.supo.state_count() << " states\n";
    for (const auto& loc : unit.locals) {
      out << "LOC_" << (loc.role == CoverKind::Preemption ? "P" : "C") << "["
          << table.name(loc.owner) << "] @" << who << ": " << loc.g.state_count()
          << " states, communicates {";
      auto com = table.name_order(loc.sigma_com);
      for (std::size_t i = 0; i < com.size(); ++i)
        out << (i ? " " : "") << table.name(com[i]);
      out << "}\n";
    }
  }
  for (const auto& v : res.verdicts)
    out << "verdict " << v.name << ": " << (v.verdict.pass ? "pass" : "FAIL") << "\n";
  return out.str();
}

}  // namespace tdes
