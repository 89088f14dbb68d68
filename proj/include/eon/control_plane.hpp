#pragma once

#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "eon/jammer.hpp"
#include "eon/phy.hpp"
#include "eon/spectrum.hpp"
#include "eon/topology.hpp"

namespace eon {

enum class ControlMode { no_jamming, unaware, aware };

std::string to_string(ControlMode mode);
ControlMode parse_control_mode(const std::string& text);

enum class BlockReason { no_spectrum = 0, qot = 1, jammed = 2 };
inline constexpr std::size_t kBlockReasonCount = 3;
std::string to_string(BlockReason reason);

struct Request {
  NodeIndex source = 0;
  NodeIndex destination = 0;
  double bandwidth_gbps = 0.0;
  double arrival_time = 0.0;
  double holding_time = 0.0;
};

struct Lightpath {
  LightpathId id = 0;
  Route route;
  SlotBlock block;
  const Modulation* modulation = nullptr;
  double bandwidth_gbps = 0.0;
  double established_at = 0.0;
  double departs_at = 0.0;
};

/// ceil(bandwidth / (slot_width_GHz * bits_per_symbol)).
int required_slots(double bandwidth_gbps, const Modulation& modulation, const PhyParams& params);

/// Controller view of the network plus the cached noise of every active
/// lightpath.
///
/// Cached secure NLI is updated incrementally when a lightpath is admitted
/// (the exact increment the admission check evaluated) and recomputed from
/// scratch for every lightpath sharing a link with one that departs.
class NetworkState {
 public:
  struct Active {
    Lightpath path;
    Channel channel;
    NoiseBreakdown noise;
  };

  NetworkState(const Topology& topology, const PhyParams& params,
               int slot_count = kDefaultSlotCount);

  const Topology& topology() const { return *topology_; }
  const PhyParams& params() const { return *params_; }
  int slot_count() const { return slot_count_; }

  const SlotGrid& grid(LinkId link) const { return grids_.at(link); }
  std::vector<const SlotGrid*> route_grids(const Route& route) const;

  const std::unordered_map<LightpathId, Active>& active() const { return active_; }
  const Active& active(LightpathId id) const { return active_.at(id); }
  /// Active lightpaths crossing `link`, in admission order.
  const std::vector<LightpathId>& on_link(LinkId link) const { return per_link_.at(link); }

  /// Cached linear SNR of an active lightpath.
  double cached_snr(LightpathId id) const;

  /// From-scratch noise of `channel` along `route` given the current actives,
  /// skipping `exclude`. `truth` adds the jamming terms on attacked links.
  NoiseBreakdown fresh_noise(const Channel& channel, const Route& route, const GroundTruth* truth,
                             std::optional<LightpathId> exclude = std::nullopt) const;

  /// Adds `path` with its precomputed noise; `nli_increments` are the exact
  /// secure-NLI increments of existing lightpaths.
  void establish(const Lightpath& path, const Channel& channel, const NoiseBreakdown& noise,
                 const std::vector<std::pair<LightpathId, double>>& nli_increments);
  void release(LightpathId id, double now);

  /// Marks `block` forbidden on both directions of the fiber carrying `link`.
  void forbid(LinkId link, const SlotBlock& block);
  struct ForbiddenEntry {
    LinkId link;
    SlotBlock block;
  };
  const std::vector<ForbiddenEntry>& forbidden_registry() const { return forbidden_; }

  /// Per-link, per-slot time-averaged occupancy over [0, horizon].
  std::vector<std::vector<double>> slot_time_average(double horizon) const;

 private:
  void recompute_nli(Active& a) const;

  const Topology* topology_;
  const PhyParams* params_;
  int slot_count_;
  std::vector<SlotGrid> grids_;
  std::vector<SlotUsageIntegrator> usage_;
  std::unordered_map<LightpathId, Active> active_;
  std::vector<std::vector<LightpathId>> per_link_;
  std::vector<ForbiddenEntry> forbidden_;
  std::vector<LightpathId> scratch_;
};

enum class Verdict { accept, reject_qot, reject_jammed };

struct Candidate {
  Route route;
  SlotBlock block;
  const Modulation* modulation = nullptr;
};

struct Evaluation {
  Verdict verdict = Verdict::reject_qot;
  Channel channel;
  NoiseBreakdown noise;
  std::vector<std::pair<LightpathId, double>> nli_increments;
};

struct RequestOutcome {
  std::optional<Lightpath> established;
  BlockReason reason = BlockReason::no_spectrum;
  int evaluations = 0;
};

/// Admission control: RSA, QoT evaluation and (in aware mode) the security
/// check that compares the measured SNR with the jammer-free estimate.
class ControlPlane {
 public:
  /// `truth` is the physical attack (null for no_jamming); it is not owned.
  ControlPlane(const RouteTable& routes, ControlMode mode, const GroundTruth* truth,
               double tolerance_db = 0.1);

  ControlMode mode() const { return mode_; }

  /// Establishes the lightpath in `state` on success.
  RequestOutcome handle_request(const Request& request, LightpathId id, NetworkState& state) const;

  Evaluation evaluate_candidate(const Candidate& candidate, const NetworkState& state) const;

  /// |measured - estimated| in dB exceeds the tolerance.
  bool detect_jamming(const Candidate& candidate, const NetworkState& state) const;

 private:
  bool detect(const Channel& channel, const NoiseBreakdown& measured) const;

  const RouteTable* routes_;
  ControlMode mode_;
  const GroundTruth* truth_;
  double tolerance_db_;
};

}  // namespace eon
