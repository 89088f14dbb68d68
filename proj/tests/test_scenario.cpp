#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "eon/scenario.hpp"
#include "test_paths.hpp"

using namespace eon;
namespace fs = std::filesystem;

namespace {

std::string scratch_file(const std::string& name, const std::string& body) {
  fs::create_directories(test_paths::scratch);
  const std::string path = std::string(test_paths::scratch) + "/" + name;
  std::ofstream(path) << body;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string base_yaml(const std::string& extra) {
  return std::string("name: t\ntopology: ") + test_paths::nsfnet + "\n" + extra;
}

bool names_field(const std::vector<Violation>& v, const std::string& field,
                 const std::string& text = "") {
  for (const auto& x : v)
    if (x.field == field && x.message.find(text) != std::string::npos) return true;
  return false;
}

std::vector<Violation> violations_of(const std::string& yaml) {
  return validate_config_file(scratch_file("v.yaml", yaml));
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(test_paths::eonsim) + " " + args + " > " +
                          test_paths::scratch + "/cli.log 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("shipped configs validate") {
  for (const auto& entry : fs::directory_iterator(test_paths::configs)) {
    if (entry.path().extension() != ".yaml") continue;
    CAPTURE(entry.path().string());
    const auto v = validate_config_file(entry.path().string());
    for (const auto& x : v) MESSAGE(x.to_string());
    CHECK(v.empty());
  }
}

TEST_CASE("defaults") {
  auto c = parse_config(base_yaml("modes: [no_jamming]\n"));
  CHECK(c.traffic.load_erlangs == 200);
  CHECK(c.traffic.requests_per_replication == 100000);
  CHECK(c.traffic.replications == 10);
  CHECK(c.sweep.step == 0.5);
  CHECK(c.tolerance_db == 0.1);
  CHECK_FALSE(c.jammer);
  CHECK(check_config(c).empty());
}

TEST_CASE("static violations name their field") {
  const std::string jam = "modes: [unaware]\njammer: {target: most_used}\n";
  CHECK(names_field(violations_of(base_yaml(jam + "sweep: {start: 0, stop: 5, step: 0}\n")),
                    "sweep.step"));
  CHECK(names_field(violations_of(base_yaml("modes: [aware]\njammer:\n  target: most_used\n"
                                            "  ranges: [[315, 10]]\n")),
                    "jammer.ranges[0]", "range exceeds grid"));
  CHECK(names_field(violations_of(base_yaml("modes: [unaware]\n")), "jammer"));
  CHECK(names_field(violations_of(base_yaml("modes: [no_jamming]\njammer: {target: most_used}\n")),
                    "jammer"));
  CHECK(names_field(violations_of(base_yaml(jam + "traffic: {load_erlangs: -1}\n")),
                    "traffic.load_erlangs"));
  CHECK(names_field(violations_of(base_yaml(jam + "bogus: 1\n")), "bogus"));
  CHECK(names_field(violations_of(base_yaml(jam + "traffic: {requests: lots}\n")),
                    "traffic.requests"));
  CHECK(names_field(violations_of(base_yaml("modes: [unaware]\njammer: {target: explicit, "
                                            "link: \"1->14\"}\n")),
                    "jammer.link"));
  CHECK(names_field(violations_of("name: t\ntopology: nowhere.txt\nmodes: [no_jamming]\n"),
                    "topology"));
  CHECK(names_field(violations_of(base_yaml(jam + "transceivers: 4\n")), "transceivers"));
  CHECK(names_field(violations_of("modes: [aware\n"), "<document>"));
}

TEST_CASE("run outputs: row counts, NA rows, reproducible bytes") {
  const std::string out = std::string(test_paths::scratch) + "/run";
  fs::remove_all(out);
  const std::string yaml = base_yaml(
      "modes: [no_jamming, unaware, aware]\n"
      "jammer: {target: most_used}\n"
      "sweep: {start: 0, stop: 5, step: 0.5}\n"
      "traffic: {requests: 300, replications: 2}\n"
      "output_dir: " + out + "\n");
  auto config = parse_config(yaml);
  REQUIRE(check_config(config).empty());
  auto first = simulate(config);
  const std::string blocking = blocking_csv(first);
  const std::string slots = slots_csv(first);
  // no_jamming: 1 point; two jammed modes: 11 points each; 2 replications.
  CHECK(count_lines(blocking) == 1 + (1 + 2 * 11) * 2);
  CHECK(count_lines(slots) == 1 + (1 + 2 * 11) * 320);
  CHECK(blocking.find("no_jamming,none,NA,0,") != std::string::npos);
  CHECK(blocking.find("no_jamming,none,NA,1,") != std::string::npos);
  CHECK(blocking.find("no_jamming,none,0,") == std::string::npos);
  CHECK(fs::exists(out + "/ranking.csv"));

  write_outputs(config, first);
  const std::string written = slurp(out + "/blocking.csv");
  CHECK(written == blocking);
  auto second = simulate(config);  // now served from the ranking cache
  CHECK(blocking_csv(second) == blocking);
  CHECK(slots_csv(second) == slots);

  // Every numeric field parses back to the same text.
  std::istringstream rows(blocking);
  std::string line;
  std::getline(rows, line);
  while (std::getline(rows, line)) {
    std::istringstream cells(line);
    std::string cell;
    int col = 0;
    while (std::getline(cells, cell, ',')) {
      if (col >= 2 && cell != "NA") CHECK(format_number(std::stod(cell)) == cell);
      ++col;
    }
    CHECK(col == 8);
  }
}

TEST_CASE("two-mode full sweep yields 2 x 11 x 10 rows") {
  const std::string yaml = base_yaml(
      "modes: [unaware, aware]\n"
      "jammer: {target: explicit, link: \"9->13\"}\n"
      "traffic: {requests: 20, replications: 10}\n");
  auto out = simulate(parse_config(yaml));
  CHECK(count_lines(blocking_csv(out)) == 1 + 2 * 11 * 10);
}

TEST_CASE("command line") {
  fs::create_directories(test_paths::scratch);
  const std::string good = std::string(test_paths::configs) + "/mu_j.yaml";
  CHECK(run_cli("validate " + good) == 0);
  const std::string bad = scratch_file(
      "bad.yaml", base_yaml("modes: [aware]\njammer: {target: most_used}\nsweep: {step: 0}\n"));
  CHECK(run_cli("validate " + bad) == 1);
  CHECK(slurp(std::string(test_paths::scratch) + "/cli.log").find("sweep.step") !=
        std::string::npos);
  CHECK(run_cli("simulate " + std::string(test_paths::scratch) + "/missing.yaml") == 1);
  CHECK(run_cli("") != 0);

  const std::string out = std::string(test_paths::scratch) + "/cli_out";
  fs::remove_all(out);
  const std::string small = scratch_file(
      "small.yaml", base_yaml("modes: [no_jamming, unaware]\njammer: {target: least_used}\n"
                              "sweep: {start: 0, stop: 1, step: 1}\n"
                              "traffic: {requests: 200, replications: 1}\n"
                              "output_dir: " + bad + "/out\n"));
  CHECK(run_cli("rank-links " + small + " --output " + out + "/rank.csv") == 0);
  CHECK(slurp(out + "/rank.csv").find("rank,link_id,link,mean_utilization") != std::string::npos);
  setenv("EONSIM_OUTPUT_DIR", out.c_str(), 1);
  CHECK(run_cli("simulate " + small) == 0);
  unsetenv("EONSIM_OUTPUT_DIR");
  CHECK(count_lines(slurp(out + "/blocking.csv")) == 1 + 3);
  CHECK(count_lines(slurp(out + "/slots.csv")) == 1 + 3 * 320);
  // An output directory below a regular file cannot be created.
  CHECK(run_cli("simulate " + small) == 2);
}
