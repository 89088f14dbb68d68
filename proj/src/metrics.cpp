#include "eon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eon {

std::optional<double> blocking_probability(const ReplicationResult& result) {
  if (result.requests <= 0) return std::nullopt;
  return static_cast<double>(result.blocked()) / static_cast<double>(result.requests);
}

UtilizationRanking utilization_ranking(std::span<const ReplicationResult> pre_run) {
  if (pre_run.empty()) throw std::invalid_argument("utilization_ranking: no replications");
  const std::size_t links = pre_run.front().link_mean_utilization.size();
  std::vector<double> mean(links, 0.0);
  for (const auto& r : pre_run) {
    if (r.link_mean_utilization.size() != links)
      throw std::invalid_argument("utilization_ranking: replications disagree on link count");
    for (std::size_t l = 0; l < links; ++l) mean[l] += r.link_mean_utilization[l];
  }
  UtilizationRanking ranking;
  for (std::size_t l = 0; l < links; ++l)
    ranking.emplace_back(static_cast<LinkId>(l), mean[l] / static_cast<double>(pre_run.size()));
  std::stable_sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  return ranking;
}

std::vector<double> slot_histogram(std::span<const ReplicationResult> results,
                                   std::optional<LinkId> link) {
  if (results.empty()) return {};
  std::vector<double> out(results.front().slot_utilization.size(), 0.0);
  for (const auto& r : results) {
    const auto& row = link ? r.link_slot_utilization.at(*link) : r.slot_utilization;
    if (row.size() != out.size()) throw std::invalid_argument("slot_histogram: slot count mismatch");
    for (std::size_t s = 0; s < out.size(); ++s) out[s] += row[s];
  }
  for (auto& v : out) v /= static_cast<double>(results.size());
  return out;
}

SampleStats sample_stats(std::span<const double> values) {
  SampleStats s;
  s.n = values.size();
  if (s.n == 0) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(s.n - 1));
    s.std_error = s.stddev / std::sqrt(static_cast<double>(s.n));
  }
  return s;
}

std::vector<double> blocking_samples(std::span<const ReplicationResult> results) {
  std::vector<double> out;
  for (const auto& r : results)
    if (auto bp = blocking_probability(r)) out.push_back(*bp);
  return out;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

void write_ranking_csv(const std::string& path, const UtilizationRanking& ranking,
                       const Topology& topology, const std::string& fingerprint) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write ranking cache '" + path + "'");
  out << "# " << fingerprint << '\n';
  out << "rank,link_id,link,mean_utilization\n";
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const auto& [id, u] = ranking[i];
    out << i + 1 << ',' << id << ',' << topology.link_label(id) << ',' << format_number(u) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing ranking cache '" + path + "'");
}

UtilizationRanking read_ranking_csv(const std::string& path, const Topology& topology) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ranking cache '" + path + "'");
  std::string line;
  std::getline(in, line);
  if (line.starts_with("#")) std::getline(in, line);
  if (line != "rank,link_id,link,mean_utilization")
    throw std::runtime_error("ranking cache '" + path + "' has an unexpected header");
  UtilizationRanking ranking;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string rank, id, label, util;
    std::getline(row, rank, ',');
    std::getline(row, id, ',');
    std::getline(row, label, ',');
    std::getline(row, util, ',');
    const LinkId link = topology.find_link(label);
    if (std::to_string(link) != id)
      throw std::runtime_error("ranking cache '" + path + "' does not match the topology");
    ranking.emplace_back(link, std::stod(util));
  }
  if (ranking.size() != topology.link_count())
    throw std::runtime_error("ranking cache '" + path + "' does not cover every link");
  return ranking;
}

std::optional<UtilizationRanking> load_cached_ranking(const std::string& path,
                                                      const Topology& topology,
                                                      const std::string& fingerprint) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string first;
  std::getline(in, first);
  if (first != "# " + fingerprint) return std::nullopt;
  return read_ranking_csv(path, topology);
}

}  // namespace eon
