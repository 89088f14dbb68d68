#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "eon/control_plane.hpp"
#include "eon/jammer.hpp"
#include "eon/phy.hpp"
#include "eon/topology.hpp"

namespace eon {

struct TrafficModel {
  double load_erlangs = 200.0;
  double mean_holding_s = 600.0;
  std::vector<double> bandwidth_choices_gbps{40.0, 200.0, 400.0};
  int requests_per_replication = 100000;
  int replications = 10;

  /// Erlang identity: load = rate * holding.
  double arrival_rate() const { return load_erlangs / mean_holding_s; }
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Draws requests from one replication's stream. Every request consumes the
/// same number of draws regardless of what the control plane does with it, so
/// runs that differ only in mode or jamming see identical traffic.
class RequestGenerator {
 public:
  RequestGenerator(std::uint64_t seed, std::size_t node_count, const TrafficModel& traffic);
  Request next();
  double last_arrival() const { return clock_; }

 private:
  std::mt19937_64 rng_;
  std::size_t nodes_;
  std::exponential_distribution<double> interarrival_;
  std::exponential_distribution<double> holding_;
  std::uniform_int_distribution<std::size_t> source_;
  std::uniform_int_distribution<std::size_t> destination_;
  std::uniform_int_distribution<std::size_t> bandwidth_;
  std::vector<double> bandwidths_;
  double clock_ = 0.0;
};

struct ReplicationResult {
  std::uint64_t seed = 0;
  std::int64_t requests = 0;
  std::array<std::int64_t, kBlockReasonCount> blocked_by_reason{};
  /// Per slot: time average over the run, then mean over directed links.
  std::vector<double> slot_utilization;
  /// [link][slot] time-averaged occupancy.
  std::vector<std::vector<double>> link_slot_utilization;
  /// Per link: mean of its slot time averages.
  std::vector<double> link_mean_utilization;
  double horizon_s = 0.0;

  std::int64_t blocked() const;
  bool operator==(const ReplicationResult&) const = default;
};

/// Called after every processed event with the state and the event time.
using EventObserver = std::function<void(const NetworkState&, const ControlPlane&, double)>;

struct ReplicationSetup {
  const Topology* topology = nullptr;
  const RouteTable* routes = nullptr;
  PhyParams params;
  TrafficModel traffic;
  ControlMode mode = ControlMode::no_jamming;
  /// Required for unaware/aware, must be empty for no_jamming.
  std::optional<GroundTruth> truth;
  double tolerance_db = 0.1;
  int slot_count = kDefaultSlotCount;
};

ReplicationResult run_replication(std::uint64_t seed, const ReplicationSetup& setup,
                                  const EventObserver& observer = {});

/// Inclusive sweep start, start + step, ... up to stop (within step/1e6).
std::vector<double> epsilon_sweep(double start, double stop, double step);

struct ScenarioPoint {
  ControlMode mode = ControlMode::no_jamming;
  /// NaN for no_jamming.
  double epsilon_db = 0.0;
  std::vector<ReplicationResult> replications;
};

struct ScenarioRequest {
  const Topology* topology = nullptr;
  const RouteTable* routes = nullptr;
  PhyParams params;
  TrafficModel traffic;
  std::vector<ControlMode> modes;
  /// Jamming-mode template; epsilon_db is overwritten per sweep point.
  JammerConfig jammer;
  LinkId target_link = 0;
  std::vector<double> epsilons_db;
  std::uint64_t base_seed = 1;
  double tolerance_db = 0.1;
  int slot_count = kDefaultSlotCount;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Every (mode, epsilon) point times every replication, run concurrently.
/// no_jamming contributes one point regardless of the sweep. Replication r
/// uses seed base_seed + r at every point.
std::vector<ScenarioPoint> run_scenario(const ScenarioRequest& request);

/// Runs `count` independent jobs on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job);

}  // namespace eon
