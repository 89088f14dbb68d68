// eonsim: elastic optical network simulator with jamming attacks.
//
//   eonsim simulate <config>     run the scenario, write blocking.csv / slots.csv
//   eonsim validate <config>     static checks only
//   eonsim rank-links <config> [-o file]   jammer-free pre-run, write ranking.csv
//
// EONSIM_OUTPUT_DIR overrides the config's output_dir.
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "eon/scenario.hpp"

namespace {

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

eon::ScenarioConfig load_with_overrides(const std::string& path) {
  eon::ScenarioConfig config = eon::load_config(path);
  if (const char* dir = std::getenv("EONSIM_OUTPUT_DIR"); dir && *dir) config.output_dir = dir;
  if (auto violations = eon::check_config(config); !violations.empty())
    throw eon::ConfigError(std::move(violations));
  return config;
}

int report_config_error(const eon::ConfigError& e) {
  std::cerr << "configuration error:\n";
  for (const auto& v : e.violations()) std::cerr << "  " << v.to_string() << '\n';
  return kConfigError;
}

int run_simulate(const std::string& path) {
  const auto config = load_with_overrides(path);
  const auto output = eon::simulate(config, &std::cout);
  eon::write_outputs(config, output);
  std::cout << "wrote " << (std::filesystem::path(config.output_dir) / "blocking.csv").string()
            << " and slots.csv\n";
  return 0;
}

int run_validate(const std::string& path) {
  const auto violations = eon::validate_config_file(path);
  if (violations.empty()) {
    std::cout << "ok\n";
    return 0;
  }
  for (const auto& v : violations) std::cout << v.to_string() << '\n';
  return kConfigError;
}

int run_rank_links(const std::string& path, const std::string& output) {
  const auto config = load_with_overrides(path);
  const eon::Topology topology = eon::load_topology(config.topology_path, config.params.span_length_km);
  const eon::RouteTable routes(topology);
  const auto ranking = eon::compute_ranking(config, topology, routes);
  auto out = config.ranking_cache.empty()
                  ? std::filesystem::path(config.output_dir) / "ranking.csv"
                  : std::filesystem::path(config.ranking_cache);
  if (!output.empty()) out = output;
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  eon::write_ranking_csv(out.string(), ranking, topology, eon::ranking_fingerprint(config));
  std::cout << "most used:  " << topology.link_label(ranking.front().first) << " ("
            << eon::format_number(ranking.front().second) << ")\n"
            << "least used: " << topology.link_label(ranking.back().first) << " ("
            << eon::format_number(ranking.back().second) << ")\n"
            << "wrote " << out.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elastic optical network simulator with jamming-aware control plane"};
  app.require_subcommand(1);
  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write CSV results");
  simulate->add_option("config", config_path, "Scenario YAML file")->required();
  auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  validate->add_option("config", config_path, "Scenario YAML file")->required();
  auto* rank = app.add_subcommand("rank-links", "Rank links by jammer-free utilization");
  rank->add_option("config", config_path, "Scenario YAML file")->required();
  std::string rank_output;
  rank->add_option("-o,--output", rank_output, "Ranking CSV path (default: the ranking cache)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*simulate) return run_simulate(config_path);
    if (*validate) return run_validate(config_path);
    if (*rank) return run_rank_links(config_path, rank_output);
  } catch (const eon::ConfigError& e) {
    return report_config_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
