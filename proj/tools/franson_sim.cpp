// franson_sim: scenario runner for the up-converted photon-pair Franson
// interferometer simulation.

#include "franson/errors.hpp"
#include "franson/report.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <iostream>
#include <optional>
#include <thread>

namespace {

struct CommonOptions {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string out;
  std::string engine;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool preset_required = false) {
  auto* cfg = cmd->add_option("--config", o.config, "scenario file (sectioned key=value)");
  auto* pre = cmd->add_option("--preset", o.preset, "built-in scenario: fig2|fig3a|fig3b|fig4|table1|calibration");
  if (preset_required) {
    pre->required();
    cfg->excludes(pre);
  } else {
    cfg->excludes(pre);
  }
  cmd->add_option("--seed", o.seed, "override the scenario seed");
  cmd->add_option("--jobs", o.jobs, "worker threads (output does not depend on it)")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "override the output directory");
  cmd->add_option("--engine", o.engine, "analytic|mc")->check(CLI::IsMember({"analytic", "mc", "monte-carlo"}));
}

franson::Scenario resolve(const CommonOptions& o) {
  using namespace franson;
  Scenario sc;
  if (!o.config.empty()) sc = load_scenario(o.config);
  else if (!o.preset.empty()) sc = parse_scenario(find_preset(o.preset).config_text);
  else throw ValidationError({"either --config or --preset is required"});
  if (o.seed) sc.seed = *o.seed;
  if (!o.out.empty()) sc.output_dir = o.out;
  if (!o.engine.empty()) sc.engine = o.engine == "analytic" ? Engine::analytic : Engine::monte_carlo;
  if (auto errs = validate(sc); !errs.empty()) throw ValidationError(std::move(errs));
  return sc;
}

int execute(const CommonOptions& o, franson::Command command) {
  const auto sc = resolve(o);
  const auto start = std::chrono::steady_clock::now();
  const auto result = franson::run_scenario(sc, command, o.jobs);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& [k, v] : result.summary) std::cout << k << " = " << v << '\n';
  for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
  std::cerr << fmt::format("elapsed {:.2f} s\n", secs);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  using franson::Command;
  CLI::App app{"Up-converted photon-pair Franson interferometer simulator"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    Command command;
  };
  const Sub subs[] = {
      {"simulate-histogram", "Monte-Carlo correlation histogram at fixed dL", Command::simulate_histogram},
      {"scan-fringe", "two-photon (or scenario-mode) fringe scan and fit", Command::scan_fringe},
      {"classical-fringe", "classical up-converted beam fringe scan and fit", Command::classical_fringe},
      {"pulse-profile", "bright/dark classical pulse profiles and pulse-area visibility", Command::pulse_profile},
      {"report-table1", "event-probability comparison table", Command::report_table1},
      {"calibrate", "derive beta, V_mode and qe from the visibility and rate targets", Command::calibrate},
  };

  std::vector<CommonOptions> opts(std::size(subs));
  std::vector<CLI::App*> cmds;
  for (std::size_t i = 0; i < std::size(subs); ++i) {
    auto* cmd = app.add_subcommand(subs[i].name, subs[i].help);
    add_common(cmd, opts[i]);
    cmds.push_back(cmd);
  }

  CommonOptions run_opts;
  auto* run = app.add_subcommand("run", "run a built-in preset with its own command");
  add_common(run, run_opts, true);

  std::string show_name;
  auto* show = app.add_subcommand("show-preset", "print a preset's scenario file");
  show->add_option("name", show_name)->required();

  auto* list = app.add_subcommand("list-presets", "list built-in presets");

  CLI11_PARSE(app, argc, argv);

  try {
    for (std::size_t i = 0; i < cmds.size(); ++i)
      if (cmds[i]->parsed()) return execute(opts[i], subs[i].command);
    if (run->parsed()) return execute(run_opts, franson::find_preset(run_opts.preset).command);
    if (show->parsed()) {
      std::cout << franson::find_preset(show_name).config_text;
      return 0;
    }
    if (list->parsed()) {
      for (const auto& p : franson::presets())
        std::cout << fmt::format("{:<12} {:<20} {}\n", p.name, franson::to_string(p.command), p.description);
      return 0;
    }
  } catch (const franson::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const franson::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
