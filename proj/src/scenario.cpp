#include "eon/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace eon {

namespace fs = std::filesystem;

namespace {

std::string join_messages(const std::vector<Violation>& violations) {
  std::string out = "invalid configuration";
  for (const auto& v : violations) out += "\n  " + v.to_string();
  return out;
}

class Reader {
 public:
  std::vector<Violation> violations;

  void unknown_keys(const YAML::Node& node, const std::string& prefix,
                    std::initializer_list<const char*> allowed) {
    if (!node.IsMap()) return;
    std::set<std::string> known(allowed.begin(), allowed.end());
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!known.contains(key)) violations.push_back({prefix + key, "unknown key"});
    }
  }

  template <typename T>
  void read(const YAML::Node& node, const char* key, const std::string& field, T& out) {
    const YAML::Node v = node[key];
    if (!v) return;
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      violations.push_back({field, "wrong type"});
    }
  }

  bool section(const YAML::Node& node, const std::string& field) {
    if (!node) return false;
    if (!node.IsMap()) {
      violations.push_back({field, "must be a mapping"});
      return false;
    }
    return true;
  }
};

}  // namespace

ConfigError::ConfigError(std::vector<Violation> violations)
    : std::runtime_error(join_messages(violations)), violations_(std::move(violations)) {}

ScenarioConfig parse_config(const std::string& yaml_text, const std::string& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::vector<Violation>{{"<document>", std::string("YAML parse error: ") + e.what()}});
  }
  if (!root.IsMap()) throw ConfigError(std::vector<Violation>{{"<document>", "top level must be a mapping"}});

  Reader r;
  ScenarioConfig c;
  r.unknown_keys(root, "",
                 {"name", "topology", "mode", "modes", "jammer", "sweep", "traffic", "physical",
                  "seed", "output_dir", "detection", "ranking_cache", "output", "threads",
                  "transceivers"});

  r.read(root, "name", "name", c.name);

  std::string topology;
  r.read(root, "topology", "topology", topology);
  if (topology.empty())
    r.violations.push_back({"topology", "required"});
  else
    c.topology_path = fs::path(topology).is_absolute() ? topology
                                                       : (fs::path(base_dir) / topology).string();

  std::vector<std::string> modes;
  if (root["mode"] && root["modes"]) r.violations.push_back({"modes", "give either mode or modes"});
  if (root["mode"]) {
    std::string m;
    r.read(root, "mode", "mode", m);
    if (!m.empty()) modes.push_back(m);
  }
  r.read(root, "modes", "modes", modes);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    try {
      c.modes.push_back(parse_control_mode(modes[i]));
    } catch (const std::invalid_argument&) {
      r.violations.push_back({"modes[" + std::to_string(i) + "]", "unknown mode '" + modes[i] + "'"});
    }
  }

  if (const YAML::Node j = root["jammer"]; r.section(j, "jammer")) {
    r.unknown_keys(j, "jammer.", {"target", "link", "ranges"});
    JammerConfig jc;
    std::string target = "most_used";
    r.read(j, "target", "jammer.target", target);
    try {
      jc.selector = parse_target_selector(target);
    } catch (const std::invalid_argument& e) {
      r.violations.push_back({"jammer.target", "unknown selector '" + target + "'"});
    }
    r.read(j, "link", "jammer.link", jc.explicit_link);
    if (j["ranges"]) {
      std::vector<std::vector<int>> ranges;
      r.read(j, "ranges", "jammer.ranges", ranges);
      jc.jammed_ranges.clear();
      for (std::size_t i = 0; i < ranges.size(); ++i) {
        if (ranges[i].size() != 2) {
          r.violations.push_back({"jammer.ranges[" + std::to_string(i) + "]",
                                  "expected [start, width]"});
          continue;
        }
        jc.jammed_ranges.push_back({ranges[i][0], ranges[i][1]});
      }
    }
    c.jammer = jc;
  }

  if (const YAML::Node s = root["sweep"]; r.section(s, "sweep")) {
    r.unknown_keys(s, "sweep.", {"start", "stop", "step"});
    r.read(s, "start", "sweep.start", c.sweep.start);
    r.read(s, "stop", "sweep.stop", c.sweep.stop);
    r.read(s, "step", "sweep.step", c.sweep.step);
  }

  if (const YAML::Node t = root["traffic"]; r.section(t, "traffic")) {
    r.unknown_keys(t, "traffic.",
                   {"load_erlangs", "mean_holding_s", "bandwidths_gbps", "requests",
                    "replications"});
    r.read(t, "load_erlangs", "traffic.load_erlangs", c.traffic.load_erlangs);
    r.read(t, "mean_holding_s", "traffic.mean_holding_s", c.traffic.mean_holding_s);
    r.read(t, "bandwidths_gbps", "traffic.bandwidths_gbps", c.traffic.bandwidth_choices_gbps);
    r.read(t, "requests", "traffic.requests", c.traffic.requests_per_replication);
    r.read(t, "replications", "traffic.replications", c.traffic.replications);
  }

  if (const YAML::Node p = root["physical"]; r.section(p, "physical")) {
    r.unknown_keys(p, "physical.",
                   {"tx_power_dbm", "slot_width_hz", "attenuation_db_per_km", "span_length_km",
                    "gamma_per_w_per_km", "beta2_ps2_per_km", "light_frequency_hz",
                    "noise_figure_db"});
    r.read(p, "tx_power_dbm", "physical.tx_power_dbm", c.params.tx_power_dbm);
    r.read(p, "slot_width_hz", "physical.slot_width_hz", c.params.slot_width_hz);
    r.read(p, "attenuation_db_per_km", "physical.attenuation_db_per_km",
           c.params.attenuation_db_per_km);
    r.read(p, "span_length_km", "physical.span_length_km", c.params.span_length_km);
    r.read(p, "gamma_per_w_per_km", "physical.gamma_per_w_per_km", c.params.gamma_per_w_per_km);
    r.read(p, "beta2_ps2_per_km", "physical.beta2_ps2_per_km", c.params.beta2_ps2_per_km);
    r.read(p, "light_frequency_hz", "physical.light_frequency_hz", c.params.light_frequency_hz);
    r.read(p, "noise_figure_db", "physical.noise_figure_db", c.params.noise_figure_db);
  }

  r.read(root, "seed", "seed", c.base_seed);
  r.read(root, "output_dir", "output_dir", c.output_dir);
  if (!fs::path(c.output_dir).is_absolute())
    c.output_dir = (fs::path(base_dir) / c.output_dir).string();

  if (const YAML::Node d = root["detection"]; r.section(d, "detection")) {
    r.unknown_keys(d, "detection.", {"tolerance_db"});
    r.read(d, "tolerance_db", "detection.tolerance_db", c.tolerance_db);
  }
  r.read(root, "ranking_cache", "ranking_cache", c.ranking_cache);
  if (!c.ranking_cache.empty() && !fs::path(c.ranking_cache).is_absolute())
    c.ranking_cache = (fs::path(base_dir) / c.ranking_cache).string();
  if (const YAML::Node o = root["output"]; r.section(o, "output")) {
    r.unknown_keys(o, "output.", {"per_link_slots"});
    r.read(o, "per_link_slots", "output.per_link_slots", c.per_link_slots);
  }
  r.read(root, "threads", "threads", c.threads);

  // Only unlimited transceivers are modelled.
  if (root["transceivers"]) {
    std::string tx;
    r.read(root, "transceivers", "transceivers", tx);
    if (tx != "unlimited") r.violations.push_back({"transceivers", "only 'unlimited' is supported"});
  }

  if (!r.violations.empty()) throw ConfigError(std::move(r.violations));
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(std::vector<Violation>{{"<file>", "cannot read config '" + path + "'"}});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), fs::path(path).parent_path().string());
}

std::vector<Violation> check_config(const ScenarioConfig& c) {
  std::vector<Violation> out;
  if (c.modes.empty()) out.push_back({"modes", "at least one mode is required"});
  const bool jammed_mode = std::any_of(c.modes.begin(), c.modes.end(),
                                       [](ControlMode m) { return m != ControlMode::no_jamming; });
  if (jammed_mode && !c.jammer) out.push_back({"jammer", "required for unaware/aware modes"});
  if (!jammed_mode && c.jammer) out.push_back({"jammer", "must be absent when mode is no_jamming"});
  std::set<ControlMode> seen;
  for (ControlMode m : c.modes)
    if (!seen.insert(m).second) out.push_back({"modes", "duplicate mode " + to_string(m)});

  if (!(c.sweep.step > 0.0) || !std::isfinite(c.sweep.step))
    out.push_back({"sweep.step", "must be positive"});
  if (!(c.sweep.start >= 0.0)) out.push_back({"sweep.start", "must be >= 0"});
  if (!(c.sweep.stop >= c.sweep.start)) out.push_back({"sweep.stop", "must be >= sweep.start"});

  if (c.jammer) {
    const auto& ranges = c.jammer->jammed_ranges;
    if (ranges.empty()) out.push_back({"jammer.ranges", "at least one range is required"});
    for (std::size_t i = 0; i < ranges.size(); ++i) {
      const auto& rg = ranges[i];
      const std::string field = "jammer.ranges[" + std::to_string(i) + "]";
      if (rg.width < 1) {
        out.push_back({field, "width must be positive"});
      } else if (rg.start < 0 || rg.end() > kDefaultSlotCount) {
        out.push_back({field, "range exceeds grid"});
      }
      for (std::size_t j = 0; j < i; ++j)
        if (rg.overlaps(ranges[j])) out.push_back({field, "overlaps range " + std::to_string(j)});
    }
    if (c.jammer->selector == TargetSelector::explicit_link && c.jammer->explicit_link.empty())
      out.push_back({"jammer.link", "required when target is explicit"});
  }

  try {
    c.traffic.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    out.push_back({msg.substr(0, colon), colon == std::string::npos ? msg : msg.substr(colon + 2)});
  }
  try {
    c.params.validate();
  } catch (const PhyError& e) {
    out.push_back({"physical", e.what()});
  }
  if (!(c.tolerance_db >= 0.0)) out.push_back({"detection.tolerance_db", "must be >= 0"});

  if (!c.topology_path.empty()) {
    try {
      const Topology topo = load_topology(c.topology_path, c.params.span_length_km);
      if (c.jammer && c.jammer->selector == TargetSelector::explicit_link &&
          !c.jammer->explicit_link.empty()) {
        try {
          topo.find_link(c.jammer->explicit_link);
        } catch (const TopologyError& e) {
          out.push_back({"jammer.link", e.what()});
        }
      }
    } catch (const TopologyError& e) {
      out.push_back({"topology", e.what()});
    }
  }
  return out;
}

std::vector<Violation> validate_config_file(const std::string& path) {
  try {
    return check_config(load_config(path));
  } catch (const ConfigError& e) {
    return e.violations();
  }
}

std::string ranking_fingerprint(const ScenarioConfig& c) {
  std::ostringstream s;
  s << "topology=" << fs::path(c.topology_path).filename().string() << " seed=" << c.base_seed
    << " requests=" << c.traffic.requests_per_replication
    << " replications=" << c.traffic.replications
    << " load=" << format_number(c.traffic.load_erlangs)
    << " holding=" << format_number(c.traffic.mean_holding_s);
  return s.str();
}

namespace {

std::string cache_path(const ScenarioConfig& c) {
  return c.ranking_cache.empty() ? (fs::path(c.output_dir) / "ranking.csv").string()
                                 : c.ranking_cache;
}

}  // namespace

UtilizationRanking compute_ranking(const ScenarioConfig& config, const Topology& topology,
                                   const RouteTable& routes) {
  ScenarioRequest req;
  req.topology = &topology;
  req.routes = &routes;
  req.params = config.params;
  req.traffic = config.traffic;
  req.modes = {ControlMode::no_jamming};
  req.base_seed = config.base_seed;
  req.tolerance_db = config.tolerance_db;
  req.threads = config.threads;
  const auto points = run_scenario(req);
  return utilization_ranking(points.front().replications);
}

SimulationOutput simulate(const ScenarioConfig& config, std::ostream* log) {
  if (auto v = check_config(config); !v.empty()) throw ConfigError(std::move(v));
  SimulationOutput out{load_topology(config.topology_path, config.params.span_length_km), {}, {}};
  const RouteTable routes(out.topology);

  ScenarioRequest req;
  req.topology = &out.topology;
  req.routes = &routes;
  req.params = config.params;
  req.traffic = config.traffic;
  req.modes = config.modes;
  req.base_seed = config.base_seed;
  req.tolerance_db = config.tolerance_db;
  req.threads = config.threads;

  const bool jammed_mode = std::any_of(config.modes.begin(), config.modes.end(),
                                       [](ControlMode m) { return m != ControlMode::no_jamming; });
  if (jammed_mode) {
    req.jammer = *config.jammer;
    req.epsilons_db = epsilon_sweep(config.sweep.start, config.sweep.stop, config.sweep.step);
    UtilizationRanking ranking;
    if (config.jammer->selector != TargetSelector::explicit_link) {
      const std::string path = cache_path(config);
      const std::string fp = ranking_fingerprint(config);
      if (auto cached = load_cached_ranking(path, out.topology, fp)) {
        ranking = std::move(*cached);
        if (log) *log << "using cached link ranking " << path << '\n';
      } else {
        if (log) *log << "computing link ranking (jammer-free pre-run)\n";
        ranking = compute_ranking(config, out.topology, routes);
        fs::create_directories(fs::path(path).parent_path());
        write_ranking_csv(path, ranking, out.topology, fp);
      }
    }
    out.target_link = resolve_target(*config.jammer, ranking, out.topology);
    req.target_link = *out.target_link;
    if (log)
      *log << "jammer target (" << to_string(config.jammer->selector)
           << "): " << out.topology.link_label(*out.target_link) << '\n';
  }

  out.points = run_scenario(req);

  if (log) {
    for (const auto& p : out.points) {
      const auto samples = blocking_samples(p.replications);
      const auto stats = sample_stats(samples);
      *log << to_string(p.mode) << " eps=" << format_number(p.epsilon_db)
           << " blocking=" << (samples.empty() ? std::string("no data") : format_number(stats.mean))
           << " (se " << format_number(stats.std_error) << ")\n";
    }
  }
  return out;
}

namespace {

std::string target_label(const SimulationOutput& o, const ScenarioPoint& p) {
  if (p.mode == ControlMode::no_jamming || !o.target_link) return "none";
  return o.topology.link_label(*o.target_link);
}

}  // namespace

std::string blocking_csv(const SimulationOutput& o) {
  std::ostringstream s;
  s << "mode,target,epsilon_db,replication,blocking_probability,blocked_no_spectrum,blocked_qot,"
       "blocked_jammed\n";
  for (const auto& p : o.points) {
    for (std::size_t r = 0; r < p.replications.size(); ++r) {
      const auto& rep = p.replications[r];
      const auto bp = blocking_probability(rep);
      s << to_string(p.mode) << ',' << target_label(o, p) << ',' << format_number(p.epsilon_db)
        << ',' << r << ',' << (bp ? format_number(*bp) : std::string("NA")) << ','
        << rep.blocked_by_reason[0] << ',' << rep.blocked_by_reason[1] << ','
        << rep.blocked_by_reason[2] << '\n';
    }
  }
  return s.str();
}

std::string slots_csv(const SimulationOutput& o) {
  std::ostringstream s;
  s << "mode,target,epsilon_db,slot_index,mean_utilization\n";
  for (const auto& p : o.points) {
    const auto hist = slot_histogram(p.replications);
    for (std::size_t i = 0; i < hist.size(); ++i)
      s << to_string(p.mode) << ',' << target_label(o, p) << ',' << format_number(p.epsilon_db)
        << ',' << i << ',' << format_number(hist[i]) << '\n';
  }
  return s.str();
}

std::string slots_by_link_csv(const SimulationOutput& o) {
  std::ostringstream s;
  s << "mode,target,epsilon_db,link,slot_index,mean_utilization\n";
  for (const auto& p : o.points) {
    for (LinkId l = 0; l < o.topology.link_count(); ++l) {
      const auto hist = slot_histogram(p.replications, l);
      for (std::size_t i = 0; i < hist.size(); ++i)
        s << to_string(p.mode) << ',' << target_label(o, p) << ',' << format_number(p.epsilon_db)
          << ',' << o.topology.link_label(l) << ',' << i << ',' << format_number(hist[i]) << '\n';
    }
  }
  return s.str();
}

namespace {

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << body;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

void write_outputs(const ScenarioConfig& config, const SimulationOutput& output) {
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
  write_file(dir / "blocking.csv", blocking_csv(output));
  write_file(dir / "slots.csv", slots_csv(output));
  if (config.per_link_slots) write_file(dir / "slots_by_link.csv", slots_by_link_csv(output));
}

}  // namespace eon
