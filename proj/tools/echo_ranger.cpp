#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "echo_ranger.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Ego-noise echo ranging: TDOE estimation, echo detection and experiment harness"};
  std::string experiment;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  app.add_option("experiment", experiment, "senr_comparison | distance_sdnr_sweep | traversal | estimate_file")
      ->required()
      ->check(CLI::IsMember({"senr_comparison", "distance_sdnr_sweep", "traversal", "estimate_file"}));
  app.add_option("--config", config_path, "JSON configuration file (defaults apply when omitted)")
      ->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Override sweep.seed");
  auto* out_opt = app.add_option("--out", out_dir, "Override output_dir");
  CLI11_PARSE(app, argc, argv);

  try {
    std::string text;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    auto cfg = echo_ranger::parse_config(text);
    cfg.experiment = echo_ranger::parse_experiment(experiment);
    if (*seed_opt) cfg.sweep.seed = seed;
    if (*out_opt) cfg.output_dir = out_dir;
    return echo_ranger::run(cfg, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "echo-ranger: " << e.what() << '\n';
    return 2;
  }
}
