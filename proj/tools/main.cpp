#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tdes/io.hpp"
#include "tdes/pipeline.hpp"

namespace fs = std::filesystem;
using namespace tdes;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitEmptySupervisor = 2;
constexpr int kExitParseError = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string local_file_name(const LocalAutomaton& loc, const std::string& agent,
                            const EventTable& table) {
  std::string owner = table.name(loc.owner);
  for (char& c : owner)
    if (c == '\'') c = 'p';
  std::string name = std::string("LOC_") +
                     (loc.role == CoverKind::Preemption ? "P_" : "C_") + owner;
  if (!agent.empty()) name += "." + agent;
  return name;
}

void write_artifacts(const Project& proj, const PipelineResult& res, const fs::path& dir,
                     PipelineStage stage) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < res.agent_ttgs.size(); ++i)
    write_file(dir / (proj.agent_names[i] + ".gen"),
               generator_text(res.agent_ttgs[i], proj.agent_names[i], proj.table));
  write_file(dir / "PLANT.gen", generator_text(res.plant, "PLANT", proj.table));
  for (const auto& ch : res.channels) {
    std::string base = (ch.desc.bounded ? "BCH_" : "CH_") + ch.desc.sender + "_" +
                       proj.table.name(ch.desc.event) + "_" + ch.desc.receiver;
    for (char& c : base)
      if (c == '\'') c = 'p';
    write_file(dir / (base + ".gen"), generator_text(ch.plant, base, proj.table));
    write_file(dir / ("SPEC_" + base + ".gen"),
               generator_text(ch.spec, "SPEC_" + base, proj.table));
  }
  if (stage == PipelineStage::Build || stage == PipelineStage::Channels) return;

  write_file(dir / "SUP.gen", generator_text(res.synth.sup.g, "SUP", proj.table));
  if (stage == PipelineStage::Synthesize) return;

  for (const auto& unit : res.units) {
    std::string who = unit.agent.empty() ? "system" : unit.agent;
    write_file(dir / ("SUPO." + who + ".txt"), dump_uncertainty(unit.supo, proj.table));
    for (const auto& loc : unit.locals) {
      std::string name = local_file_name(loc, unit.agent, proj.table);
      write_file(dir / (name + ".gen"), local_text(loc, name, proj.table));
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Timed supervisor localization toolkit"};
  app.require_subcommand(1);

  std::string project_path;
  std::string out_dir = "out";
  std::string ambient;
  std::string marking;
  unsigned seed = 0;

  std::vector<CLI::App*> commands;
  for (const char* name : {"build", "channels", "synthesize", "localize", "verify", "report"}) {
    CLI::App* cmd = app.add_subcommand(name);
    cmd->add_option("project", project_path, "project file")->required();
    cmd->add_option("--out", out_dir, "artifact output directory");
    cmd->add_option("--ambient", ambient, "ambient policy: fixed | iterated");
    cmd->add_option("--marking", marking, "TTG marking rule: activity | default-timers");
    cmd->add_option("--seed", seed, "seed (randomized test harness only)");
    commands.push_back(cmd);
  }

  CLI11_PARSE(app, argc, argv);
  std::string command = app.get_subcommands().front()->get_name();

  try {
    ProjectConfig cfg = parse_project(read_file(project_path));
    if (!ambient.empty()) cfg.options["ambient"] = ambient;
    if (!marking.empty()) cfg.options["marking"] = marking;
    Project proj = elaborate(cfg);
    PipelineOptions opts = options_from_project(proj);

    PipelineStage stage = PipelineStage::Verify;
    if (command == "build") stage = PipelineStage::Build;
    else if (command == "channels") stage = PipelineStage::Channels;
    else if (command == "synthesize") stage = PipelineStage::Synthesize;
    else if (command == "localize") stage = PipelineStage::Localize;

    PipelineResult res = run_pipeline(proj, opts, stage);
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& line : res.log.lines) std::cout << "log " << line << "\n";
    write_artifacts(proj, res, out_dir, stage);

    if (command == "build") {
      for (std::size_t i = 0; i < res.agent_ttgs.size(); ++i)
        std::cout << proj.agent_names[i] << ": " << res.agent_ttgs[i].state_count()
                  << " states, " << res.agent_ttgs[i].transition_count()
                  << " transitions\n";
      std::cout << "PLANT: " << res.plant.state_count() << " states, "
                << res.plant.transition_count() << " transitions\n";
    } else if (command == "channels") {
      for (const auto& ch : res.channels)
        std::cout << (ch.desc.bounded ? "BCH" : "CH") << "(" << ch.desc.sender << ","
                  << proj.table.name(ch.desc.event) << "," << ch.desc.receiver
                  << "): " << ch.plant.state_count() << " states, spec "
                  << ch.spec.state_count() << " states\n";
    } else if (command == "synthesize") {
      std::cout << "SUP: " << res.synth.sup.g.state_count() << " states, "
                << res.synth.sup.g.transition_count() << " transitions\n";
    } else if (command == "localize") {
      std::cout << "SUP: " << res.synth.sup.g.state_count() << " states, "
                << res.synth.sup.g.transition_count() << " transitions\n";
      for (const auto& unit : res.units)
        for (const auto& loc : unit.locals)
          std::cout << local_file_name(loc, unit.agent, proj.table) << ": "
                    << loc.g.state_count() << " states\n";
    } else if (command == "verify") {
      bool ok = true;
      for (const auto& v : res.verdicts) {
        std::cout << "verdict " << v.name << ": " << (v.verdict.pass ? "pass" : "FAIL");
        if (!v.verdict.pass)
          std::cout << " (" << v.verdict.reason << " at "
                    << format_word(v.verdict.counterexample, proj.table) << ")";
        std::cout << "\n";
        ok = ok && v.verdict.pass;
      }
      std::ostringstream resfile;
      for (const auto& v : res.verdicts)
        resfile << v.name << " " << (v.verdict.pass ? "pass" : "fail") << "\n";
      write_file(fs::path(out_dir) / "verdicts.txt", resfile.str());
      if (!ok) return kExitVerificationFailure;
    } else if (command == "report") {
      std::string text = report_text(proj, res);
      std::cout << text;
      write_file(fs::path(out_dir) / "report.txt", text);
      if (!res.all_verdicts_pass()) return kExitVerificationFailure;
    }
    return kExitOk;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const EmptySupervisorError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEmptySupervisor;
  } catch (const EquivalenceFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerificationFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  }
}
