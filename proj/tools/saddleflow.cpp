#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "saddleflow/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"saddleflow: simultaneous gradient methods for convex-concave minimax problems"};
  app.require_subcommand(1);

  std::string config_path, out_dir, run_dir, checks = "all", preset_name;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  auto* run = app.add_subcommand("run", "execute a seeded experiment config");
  run->add_option("config", config_path, "config JSON file")->required();
  run->add_option("--jobs", jobs, "worker threads for the seed fan-out");
  run->add_option("--out", out_dir, "output directory (overrides the config)");

  auto* phase = app.add_subcommand("phase", "integrate continuous-time flows");
  phase->add_option("config", config_path, "config JSON file")->required();
  phase->add_option("--out", out_dir, "output directory (overrides the config)");

  auto* report = app.add_subcommand("report", "run diagnostics over a run directory");
  report->add_option("dir", run_dir, "run directory produced by 'run'")->required();
  report->add_option("--checks", checks, "all|rates|bounds|lemmas")
      ->check(CLI::IsMember({"all", "rates", "bounds", "lemmas"}));

  auto* presets = app.add_subcommand("presets", "list or emit shipped configurations");
  auto* presets_list = presets->add_subcommand("list", "list preset names");
  auto* presets_emit = presets->add_subcommand("emit", "print a preset config to stdout");
  presets_emit->add_option("name", preset_name, "preset name")->required();
  presets->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : saddleflow::kExitConfigError;
  }

  if (run->parsed()) return saddleflow::cmd_run(config_path, jobs, out_dir);
  if (phase->parsed()) return saddleflow::cmd_phase(config_path, out_dir);
  if (report->parsed()) return saddleflow::cmd_report(run_dir, checks);
  if (presets_list->parsed()) {
    for (const auto& name : saddleflow::preset_names()) std::cout << name << '\n';
    return saddleflow::kExitOk;
  }
  if (presets_emit->parsed()) {
    try {
      std::cout << saddleflow::preset_text(preset_name);
      return saddleflow::kExitOk;
    } catch (const std::exception& e) {
      std::cerr << e.what() << '\n';
      return saddleflow::kExitConfigError;
    }
  }
  return saddleflow::kExitConfigError;
}
