#include "eon/jammer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eon {

std::string to_string(TargetSelector s) {
  switch (s) {
    case TargetSelector::most_used: return "most_used";
    case TargetSelector::least_used: return "least_used";
    case TargetSelector::explicit_link: return "explicit";
  }
  return "?";
}

TargetSelector parse_target_selector(const std::string& text) {
  if (text == "most_used" || text == "MU") return TargetSelector::most_used;
  if (text == "least_used" || text == "LU") return TargetSelector::least_used;
  if (text == "explicit") return TargetSelector::explicit_link;
  throw std::invalid_argument("jammer.target: unknown selector '" + text + "'");
}

void validate(const JammerConfig& config, int slot_count) {
  if (!(config.epsilon_db >= 0.0) || !std::isfinite(config.epsilon_db))
    throw std::invalid_argument("jammer.epsilon_db: must be >= 0");
  if (config.selector == TargetSelector::explicit_link && config.explicit_link.empty())
    throw std::invalid_argument("jammer.link: required when target is explicit");
  for (std::size_t i = 0; i < config.jammed_ranges.size(); ++i) {
    const auto& r = config.jammed_ranges[i];
    if (r.width < 1 || r.start < 0 || r.end() > slot_count)
      throw std::invalid_argument("jammer.ranges[" + std::to_string(i) + "]: range exceeds grid");
    for (std::size_t j = 0; j < i; ++j)
      if (r.overlaps(config.jammed_ranges[j]))
        throw std::invalid_argument("jammer.ranges[" + std::to_string(i) +
                                    "]: overlaps range " + std::to_string(j));
  }
}

LinkId resolve_target(const JammerConfig& config, const UtilizationRanking& ranking,
                      const Topology& topology) {
  switch (config.selector) {
    case TargetSelector::explicit_link:
      return topology.find_link(config.explicit_link);
    case TargetSelector::most_used:
    case TargetSelector::least_used:
      if (ranking.empty()) throw std::invalid_argument("resolve_target: empty utilization ranking");
      for (const auto& [id, _] : ranking)
        if (id >= topology.link_count())
          throw std::invalid_argument("resolve_target: ranking names an unknown link");
      return config.selector == TargetSelector::most_used ? ranking.front().first
                                                          : ranking.back().first;
  }
  throw std::logic_error("unreachable");
}

double excess_power_w(double epsilon_db, const PhyParams& params) {
  return params.tx_power_w() * std::expm1(epsilon_db / 10.0 * std::log(10.0));
}

GroundTruth ground_truth_channels(const JammerConfig& config, LinkId target_link,
                                  const PhyParams& params) {
  GroundTruth truth;
  truth.target_link = target_link;
  truth.excess_power_w = excess_power_w(config.epsilon_db, params);
  const double total_power = params.tx_power_w() + truth.excess_power_w;
  for (const auto& range : config.jammed_ranges)
    truth.channels.push_back(make_channel(range, total_power, params, /*is_jammer=*/true));
  return truth;
}

}  // namespace eon
