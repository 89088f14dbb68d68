#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eon/jammer.hpp"
#include "eon/sim.hpp"
#include "eon/topology.hpp"

namespace eon {

/// blocked / requests, or nullopt when no request was offered.
std::optional<double> blocking_probability(const ReplicationResult& result);

/// Links by whole-run mean utilization (averaged over replications),
/// descending; ties go to the lower link id.
UtilizationRanking utilization_ranking(std::span<const ReplicationResult> pre_run);

/// Per-slot utilization averaged over replications. With `link` set, only that
/// link's row is used instead of the all-links mean.
std::vector<double> slot_histogram(std::span<const ReplicationResult> results,
                                   std::optional<LinkId> link = std::nullopt);

struct SampleStats {
  double mean = 0.0;
  double stddev = 0.0;     // sample (n - 1) standard deviation
  double std_error = 0.0;  // stddev / sqrt(n)
  std::size_t n = 0;
};

SampleStats sample_stats(std::span<const double> values);
/// Blocking probability of each replication (replications with zero requests
/// are skipped).
std::vector<double> blocking_samples(std::span<const ReplicationResult> results);

/// Ranking cache: a `# <fingerprint>` line, then
/// `rank,link_id,link,mean_utilization` CSV.
void write_ranking_csv(const std::string& path, const UtilizationRanking& ranking,
                       const Topology& topology, const std::string& fingerprint);
/// Throws std::runtime_error on a malformed file.
UtilizationRanking read_ranking_csv(const std::string& path, const Topology& topology);
/// nullopt when the file is missing or was produced under another fingerprint.
std::optional<UtilizationRanking> load_cached_ranking(const std::string& path,
                                                      const Topology& topology,
                                                      const std::string& fingerprint);

/// "%.10g" with no locale dependence.
std::string format_number(double value);

}  // namespace eon
