#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eon/phy.hpp"
#include "eon/spectrum.hpp"
#include "eon/topology.hpp"

namespace eon {

enum class TargetSelector { most_used, least_used, explicit_link };

std::string to_string(TargetSelector s);
TargetSelector parse_target_selector(const std::string& text);

inline std::vector<SlotBlock> default_jammed_ranges() { return {{50, 10}, {140, 10}, {230, 10}}; }

struct JammerConfig {
  TargetSelector selector = TargetSelector::most_used;
  /// Link label ("A->B") when `selector` is explicit_link.
  std::string explicit_link;
  std::vector<SlotBlock> jammed_ranges = default_jammed_ranges();
  double epsilon_db = 0.0;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const JammerConfig& config, int slot_count = kDefaultSlotCount);

using UtilizationRanking = std::vector<std::pair<LinkId, double>>;

LinkId resolve_target(const JammerConfig& config, const UtilizationRanking& ranking,
                      const Topology& topology);

/// What the attacker actually injects. The jammed fiber is attacked in both
/// directions.
struct GroundTruth {
  LinkId target_link = 0;
  std::vector<Channel> channels;
  double excess_power_w = 0.0;

  bool attacks(const Link& link) const { return link.fiber() == target_link / 2; }
  JammerState state() const { return JammerState{channels, excess_power_w}; }
};

/// P * (10^(eps_db / 10) - 1), the power added on top of the nominal P.
double excess_power_w(double epsilon_db, const PhyParams& params);

GroundTruth ground_truth_channels(const JammerConfig& config, LinkId target_link,
                                  const PhyParams& params);

}  // namespace eon
