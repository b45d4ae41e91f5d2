#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cppweave/pipeline.hpp"

int main(int argc, char** argv) {
  using namespace cppweave;
  CLI::App app{"Coded path protection design and verification"};
  app.require_subcommand(1, 1);

  std::string topology, demands, mode = "strict", out = ".", metric = "length";
  std::uint64_t seed = 0;
  bool details = false;

  for (const char* name : {"solve", "convert", "verify", "report", "export-dot", "all"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the pipeline up to ") + name);
    sub->add_option("--topology", topology, "topology file (.json or text)")->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--demands", demands, "demand file (.json or text)")->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--mode", mode, "grouping rules")
        ->check(CLI::IsMember({"strict", "relaxed"}));
    sub->add_option("--seed", seed, "trail construction seed (CPPWEAVE_SEED overrides)");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--metric", metric, "routing metric")
        ->check(CLI::IsMember({"length", "hops"}));
    sub->add_flag("--details", details, "print every verdict of every failure");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  RunConfig cfg;
  cfg.stage = stage_from_string(app.get_subcommands().front()->get_name());
  cfg.topology_path = topology;
  cfg.demands_path = demands;
  cfg.mode = mode_from_string(mode);
  cfg.out_dir = out;
  cfg.metric = metric == "hops" ? Metric::Hops : Metric::Length;
  cfg.seed = seed;
  cfg.details = details;
  if (const char* env = std::getenv("CPPWEAVE_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: CPPWEAVE_SEED is not a number: " << env << "\n";
      return kExitInputError;
    }
  }

  RunResult r = run_pipeline(cfg);
  if (!r.error.empty()) {
    std::cerr << "error: " << r.error << "\n";
    return r.exit_code;
  }
  std::cout << render_report(*r.report);
  if (details && r.report->verified)
    std::cout << "\n" << read_file((std::filesystem::path(out) / "verification.txt").string());
  for (const auto& a : r.artifacts) std::cout << "wrote " << a << "\n";
  return r.exit_code;
}
