#include "eon/sim.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <thread>

namespace eon {

void TrafficModel::validate() const {
  if (!(load_erlangs > 0.0) || !std::isfinite(load_erlangs))
    throw std::invalid_argument("traffic.load_erlangs: must be positive");
  if (!(mean_holding_s > 0.0) || !std::isfinite(mean_holding_s))
    throw std::invalid_argument("traffic.mean_holding_s: must be positive");
  if (bandwidth_choices_gbps.empty())
    throw std::invalid_argument("traffic.bandwidths_gbps: must not be empty");
  for (double b : bandwidth_choices_gbps)
    if (!(b > 0.0)) throw std::invalid_argument("traffic.bandwidths_gbps: must be positive");
  if (requests_per_replication < 0)
    throw std::invalid_argument("traffic.requests: must be >= 0");
  if (replications < 1) throw std::invalid_argument("traffic.replications: must be >= 1");
}

RequestGenerator::RequestGenerator(std::uint64_t seed, std::size_t node_count,
                                   const TrafficModel& traffic)
    : rng_(seed),
      nodes_(node_count),
      interarrival_(traffic.arrival_rate()),
      holding_(1.0 / traffic.mean_holding_s),
      source_(0, node_count - 1),
      destination_(0, node_count - 2),
      bandwidth_(0, traffic.bandwidth_choices_gbps.size() - 1),
      bandwidths_(traffic.bandwidth_choices_gbps) {
  if (node_count < 2) throw std::invalid_argument("traffic needs at least two nodes");
}

Request RequestGenerator::next() {
  Request r;
  clock_ += interarrival_(rng_);
  r.arrival_time = clock_;
  r.source = static_cast<NodeIndex>(source_(rng_));
  std::size_t d = destination_(rng_);
  if (d >= r.source) ++d;
  r.destination = static_cast<NodeIndex>(d);
  r.bandwidth_gbps = bandwidths_[bandwidth_(rng_)];
  r.holding_time = holding_(rng_);
  return r;
}

std::int64_t ReplicationResult::blocked() const {
  std::int64_t total = 0;
  for (auto b : blocked_by_reason) total += b;
  return total;
}

namespace {

struct Departure {
  double time;
  LightpathId id;
  bool operator>(const Departure& o) const { return time != o.time ? time > o.time : id > o.id; }
};

}  // namespace

ReplicationResult run_replication(std::uint64_t seed, const ReplicationSetup& setup,
                                  const EventObserver& observer) {
  if (!setup.topology || !setup.routes) throw std::invalid_argument("replication without topology");
  if ((setup.mode == ControlMode::no_jamming) == setup.truth.has_value())
    throw std::invalid_argument("jammer must be present exactly when mode is not no_jamming");
  setup.traffic.validate();
  setup.params.validate();

  const Topology& topology = *setup.topology;
  const GroundTruth* truth = setup.truth ? &*setup.truth : nullptr;
  NetworkState state(topology, setup.params, setup.slot_count);
  ControlPlane control(*setup.routes, setup.mode, truth, setup.tolerance_db);
  RequestGenerator generator(seed, topology.node_count(), setup.traffic);
  std::priority_queue<Departure, std::vector<Departure>, std::greater<>> departures;

  ReplicationResult result;
  result.seed = seed;
  result.requests = setup.traffic.requests_per_replication;
  double now = 0.0;

  auto depart = [&] {
    const Departure d = departures.top();
    departures.pop();
    now = d.time;
    state.release(d.id, now);
    if (observer) observer(state, control, now);
  };

  for (std::int64_t i = 0; i < result.requests; ++i) {
    const Request request = generator.next();
    // Departures at the arrival instant go first.
    while (!departures.empty() && departures.top().time <= request.arrival_time) depart();
    now = request.arrival_time;
    const RequestOutcome outcome = control.handle_request(request, i, state);
    if (outcome.established)
      departures.push({outcome.established->departs_at, outcome.established->id});
    else
      ++result.blocked_by_reason[static_cast<std::size_t>(outcome.reason)];
    if (observer) observer(state, control, now);
  }
  while (!departures.empty()) depart();

  result.horizon_s = now;
  result.link_slot_utilization = state.slot_time_average(now);
  const std::size_t links = result.link_slot_utilization.size();
  result.slot_utilization.assign(setup.slot_count, 0.0);
  result.link_mean_utilization.assign(links, 0.0);
  for (std::size_t l = 0; l < links; ++l) {
    const auto& row = result.link_slot_utilization[l];
    double sum = 0.0;
    for (int s = 0; s < setup.slot_count; ++s) {
      result.slot_utilization[s] += row[s];
      sum += row[s];
    }
    result.link_mean_utilization[l] = sum / setup.slot_count;
  }
  for (auto& v : result.slot_utilization) v /= static_cast<double>(links);
  return result;
}

std::vector<double> epsilon_sweep(double start, double stop, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("sweep.step: must be positive");
  if (!(stop >= start)) throw std::invalid_argument("sweep.stop: must be >= sweep.start");
  std::vector<double> out;
  const auto n = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-6));
  for (std::int64_t i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t)
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            job(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<ScenarioPoint> run_scenario(const ScenarioRequest& request) {
  request.traffic.validate();
  std::vector<ScenarioPoint> points;
  for (ControlMode mode : request.modes) {
    if (mode == ControlMode::no_jamming) {
      points.push_back({mode, std::numeric_limits<double>::quiet_NaN(), {}});
      continue;
    }
    for (double eps : request.epsilons_db) points.push_back({mode, eps, {}});
  }
  const auto reps = static_cast<std::size_t>(request.traffic.replications);
  for (auto& p : points) p.replications.resize(reps);

  std::vector<std::optional<GroundTruth>> truths(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].mode == ControlMode::no_jamming) continue;
    JammerConfig jc = request.jammer;
    jc.epsilon_db = points[i].epsilon_db;
    validate(jc, request.slot_count);
    truths[i] = ground_truth_channels(jc, request.target_link, request.params);
  }

  parallel_for(points.size() * reps, request.threads, [&](std::size_t job) {
    const std::size_t p = job / reps;
    const std::size_t r = job % reps;
    ReplicationSetup setup{request.topology, request.routes, request.params, request.traffic,
                           points[p].mode,   truths[p],      request.tolerance_db,
                           request.slot_count};
    points[p].replications[r] = run_replication(request.base_seed + r, setup);
  });
  return points;
}

}  // namespace eon
