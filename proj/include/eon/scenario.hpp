#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eon/control_plane.hpp"
#include "eon/jammer.hpp"
#include "eon/metrics.hpp"
#include "eon/phy.hpp"
#include "eon/sim.hpp"

namespace eon {

/// A configuration problem, named by its dotted field path.
struct Violation {
  std::string field;
  std::string message;
  std::string to_string() const { return field + ": " + message; }
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

struct SweepConfig {
  double start = 0.0;
  double stop = 5.0;
  double step = 0.5;
};

struct ScenarioConfig {
  std::string name;
  /// Resolved against the config file's directory.
  std::string topology_path;
  std::vector<ControlMode> modes;
  std::optional<JammerConfig> jammer;
  SweepConfig sweep;
  TrafficModel traffic;
  PhyParams params;
  std::uint64_t base_seed = 1;
  std::string output_dir = "out";
  double tolerance_db = 0.1;
  /// Ranking cache; defaults to <output_dir>/ranking.csv.
  std::string ranking_cache;
  bool per_link_slots = false;
  unsigned threads = 0;
};

/// Parses a YAML scenario. Unknown keys, type errors and bad values are all
/// collected; throws ConfigError if there is any.
ScenarioConfig parse_config(const std::string& yaml_text, const std::string& base_dir = ".");
ScenarioConfig load_config(const std::string& path);

/// Static checks on a parsed config, including that the topology file loads.
std::vector<Violation> check_config(const ScenarioConfig& config);

/// Parses and checks `path` without running anything.
std::vector<Violation> validate_config_file(const std::string& path);

/// Identifies the jammer-free pre-run a ranking was computed from.
std::string ranking_fingerprint(const ScenarioConfig& config);

struct SimulationOutput {
  Topology topology;
  std::optional<LinkId> target_link;
  std::vector<ScenarioPoint> points;
};

/// Jammer-free pre-run over the config's seeds and traffic.
UtilizationRanking compute_ranking(const ScenarioConfig& config, const Topology& topology,
                                   const RouteTable& routes);

/// Runs every point of the scenario. Uses (and refreshes) the ranking cache
/// when the jammer target is a selector.
SimulationOutput simulate(const ScenarioConfig& config, std::ostream* log = nullptr);

/// blocking.csv / slots.csv bodies.
std::string blocking_csv(const SimulationOutput& output);
std::string slots_csv(const SimulationOutput& output);
std::string slots_by_link_csv(const SimulationOutput& output);

/// Writes the CSV files into the config's output directory.
void write_outputs(const ScenarioConfig& config, const SimulationOutput& output);

}  // namespace eon
