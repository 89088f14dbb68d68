#include "eon/control_plane.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eon {

std::string to_string(ControlMode mode) {
  switch (mode) {
    case ControlMode::no_jamming: return "no_jamming";
    case ControlMode::unaware: return "unaware";
    case ControlMode::aware: return "aware";
  }
  return "?";
}

ControlMode parse_control_mode(const std::string& text) {
  if (text == "no_jamming") return ControlMode::no_jamming;
  if (text == "unaware") return ControlMode::unaware;
  if (text == "aware") return ControlMode::aware;
  throw std::invalid_argument("unknown control mode '" + text + "'");
}

std::string to_string(BlockReason reason) {
  switch (reason) {
    case BlockReason::no_spectrum: return "no_spectrum";
    case BlockReason::qot: return "qot";
    case BlockReason::jammed: return "jammed";
  }
  return "?";
}

int required_slots(double bandwidth_gbps, const Modulation& modulation, const PhyParams& params) {
  if (!(bandwidth_gbps > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  const double per_slot_gbps = params.slot_width_hz / 1e9 * modulation.bits_per_symbol;
  const double ratio = bandwidth_gbps / per_slot_gbps;
  return std::max(1, static_cast<int>(std::ceil(ratio - 1e-9)));
}

// ---------------------------------------------------------------------------

NetworkState::NetworkState(const Topology& topology, const PhyParams& params, int slot_count)
    : topology_(&topology),
      params_(&params),
      slot_count_(slot_count),
      grids_(topology.link_count(), SlotGrid(slot_count)),
      usage_(topology.link_count(), SlotUsageIntegrator(slot_count)),
      per_link_(topology.link_count()) {}

std::vector<const SlotGrid*> NetworkState::route_grids(const Route& route) const {
  std::vector<const SlotGrid*> out;
  out.reserve(route.links.size());
  for (LinkId l : route.links) out.push_back(&grids_.at(l));
  return out;
}

double NetworkState::cached_snr(LightpathId id) const {
  const Active& a = active_.at(id);
  return a.channel.psd / a.noise.total();
}

NoiseBreakdown NetworkState::fresh_noise(const Channel& channel, const Route& route,
                                         const GroundTruth* truth,
                                         std::optional<LightpathId> exclude) const {
  const PhyParams& p = *params_;
  NoiseBreakdown out;
  int spans = 0;
  const double self = self_nli_term(channel, p);
  for (LinkId l : route.links) {
    const Link& link = topology_->link(l);
    spans += link.span_count;
    // Same summation order as nli_secure_psd.
    double per_span = self;
    for (LightpathId other : per_link_[l]) {
      if (exclude && other == *exclude) continue;
      per_span += cross_nli_term(channel, active_.at(other).channel, p);
    }
    out.nli += link.span_count * per_span;
  }
  out.ase = ase_psd(spans, p);
  if (truth) {
    for (LinkId l : route.links) {
      const Link& link = topology_->link(l);
      if (!truth->attacks(link)) continue;
      double per_span = 0.0;
      for (const Channel& j : truth->channels) {
        if (channel.block.overlaps(j.block)) continue;
        per_span += jamming_nli_term(channel, j, truth->excess_power_w, p);
      }
      out.jamming += link.span_count * per_span;
      for (const Channel& j : truth->channels)
        out.inband += inband_jamming_term(channel, j, truth->excess_power_w);
    }
  }
  return out;
}

void NetworkState::recompute_nli(Active& a) const {
  const PhyParams& p = *params_;
  const double self = self_nli_term(a.channel, p);
  double nli = 0.0;
  for (LinkId l : a.path.route.links) {
    double per_span = self;
    for (LightpathId other : per_link_[l]) {
      if (other == a.path.id) continue;
      per_span += cross_nli_term(a.channel, active_.at(other).channel, p);
    }
    nli += topology_->link(l).span_count * per_span;
  }
  a.noise.nli = nli;
}

void NetworkState::establish(const Lightpath& path, const Channel& channel,
                             const NoiseBreakdown& noise,
                             const std::vector<std::pair<LightpathId, double>>& nli_increments) {
  if (active_.contains(path.id)) throw std::logic_error("duplicate lightpath id");
  std::vector<SlotGrid*> grids;
  for (LinkId l : path.route.links) grids.push_back(&grids_.at(l));
  allocate(grids, path.block, path.id);
  for (LinkId l : path.route.links) {
    usage_[l].on_occupy(path.block, path.established_at);
    per_link_[l].push_back(path.id);
  }
  for (const auto& [id, inc] : nli_increments) active_.at(id).noise.nli += inc;
  active_.emplace(path.id, Active{path, channel, noise});
}

void NetworkState::release(LightpathId id, double now) {
  auto it = active_.find(id);
  if (it == active_.end()) throw SpectrumError("release of unknown lightpath " + std::to_string(id));
  const Lightpath path = it->second.path;
  std::vector<SlotGrid*> grids;
  for (LinkId l : path.route.links) grids.push_back(&grids_.at(l));
  eon::release(grids, id);
  scratch_.clear();
  for (LinkId l : path.route.links) {
    usage_[l].on_vacate(path.block, now);
    auto& list = per_link_[l];
    list.erase(std::find(list.begin(), list.end(), id));
    scratch_.insert(scratch_.end(), list.begin(), list.end());
  }
  active_.erase(it);
  std::sort(scratch_.begin(), scratch_.end());
  scratch_.erase(std::unique(scratch_.begin(), scratch_.end()), scratch_.end());
  for (LightpathId other : scratch_) recompute_nli(active_.at(other));
}

void NetworkState::forbid(LinkId link, const SlotBlock& block) {
  const Link& l = topology_->link(link);
  for (LinkId dir : {l.id, l.reverse()}) {
    grids_.at(dir).forbid(block);
    const bool known = std::any_of(forbidden_.begin(), forbidden_.end(), [&](const auto& e) {
      return e.link == dir && e.block == block;
    });
    if (!known) forbidden_.push_back({dir, block});
  }
}

std::vector<std::vector<double>> NetworkState::slot_time_average(double horizon) const {
  std::vector<std::vector<double>> out;
  out.reserve(usage_.size());
  for (const auto& u : usage_) out.push_back(u.time_average(horizon));
  return out;
}

// ---------------------------------------------------------------------------

ControlPlane::ControlPlane(const RouteTable& routes, ControlMode mode, const GroundTruth* truth,
                           double tolerance_db)
    : routes_(&routes), mode_(mode), truth_(truth), tolerance_db_(tolerance_db) {
  if (mode == ControlMode::no_jamming && truth)
    throw std::invalid_argument("no_jamming mode cannot carry a jammer");
  if (!(tolerance_db >= 0.0)) throw std::invalid_argument("detection tolerance must be >= 0");
}

bool ControlPlane::detect(const Channel& channel, const NoiseBreakdown& measured) const {
  NoiseBreakdown estimated = measured;
  estimated.jamming = 0.0;
  estimated.inband = 0.0;
  const double measured_db = linear_to_db(channel.psd / measured.total());
  const double estimated_db = linear_to_db(channel.psd / estimated.total());
  return std::abs(measured_db - estimated_db) > tolerance_db_;
}

bool ControlPlane::detect_jamming(const Candidate& candidate, const NetworkState& state) const {
  if (!truth_) return false;
  const Channel channel =
      make_channel(candidate.block, state.params().tx_power_w(), state.params());
  return detect(channel, state.fresh_noise(channel, candidate.route, truth_));
}

Evaluation ControlPlane::evaluate_candidate(const Candidate& candidate,
                                            const NetworkState& state) const {
  const PhyParams& p = state.params();
  Evaluation ev;
  ev.channel = make_channel(candidate.block, p.tx_power_w(), p);
  ev.noise = state.fresh_noise(ev.channel, candidate.route, truth_);

  if (mode_ == ControlMode::aware && truth_ && detect(ev.channel, ev.noise)) {
    ev.verdict = Verdict::reject_jammed;
    return ev;
  }
  if (!qot_verdict(ev.channel.psd / ev.noise.total(), *candidate.modulation)) {
    ev.verdict = Verdict::reject_qot;
    return ev;
  }

  // Existing lightpaths sharing a link must stay above their thresholds.
  for (LinkId l : candidate.route.links) {
    const int spans = state.topology().link(l).span_count;
    for (LightpathId other : state.on_link(l)) {
      const double inc = spans * cross_nli_term(state.active(other).channel, ev.channel, p);
      auto it = std::find_if(ev.nli_increments.begin(), ev.nli_increments.end(),
                             [&](const auto& e) { return e.first == other; });
      if (it == ev.nli_increments.end())
        ev.nli_increments.emplace_back(other, inc);
      else
        it->second += inc;
    }
  }
  for (const auto& [other, inc] : ev.nli_increments) {
    const auto& a = state.active(other);
    NoiseBreakdown n = a.noise;
    n.nli += inc;
    if (!qot_verdict(a.channel.psd / n.total(), *a.path.modulation)) {
      ev.verdict = Verdict::reject_qot;
      ev.nli_increments.clear();
      return ev;
    }
  }
  ev.verdict = Verdict::accept;
  return ev;
}

RequestOutcome ControlPlane::handle_request(const Request& request, LightpathId id,
                                            NetworkState& state) const {
  RequestOutcome outcome;
  const Route& route = routes_->route(request.source, request.destination);
  const bool aware = mode_ == ControlMode::aware;
  const auto& table = modulation_table();
  bool saw_qot = false;
  bool saw_jammed = false;

  for (auto mod = table.rbegin(); mod != table.rend(); ++mod) {
    const int width = required_slots(request.bandwidth_gbps, *mod, state.params());
    int min_start = 0;
    while (true) {
      const auto grids = state.route_grids(route);
      const auto block = first_fit(grids, width, aware, min_start);
      if (!block) break;
      ++outcome.evaluations;
      const Candidate candidate{route, *block, &*mod};
      Evaluation ev = evaluate_candidate(candidate, state);
      if (ev.verdict == Verdict::accept) {
        Lightpath path{id,
                       route,
                       *block,
                       &*mod,
                       request.bandwidth_gbps,
                       request.arrival_time,
                       request.arrival_time + request.holding_time};
        state.establish(path, ev.channel, ev.noise, ev.nli_increments);
        outcome.established = std::move(path);
        return outcome;
      }
      if (ev.verdict == Verdict::reject_qot) {
        saw_qot = true;
        break;
      }
      // Jammed: forbid the jammed ranges this block overlaps on the attacked
      // fiber. Pure out-of-band detections forbid nothing; the search moves on.
      saw_jammed = true;
      bool forbade = false;
      for (const Channel& j : truth_->channels) {
        if (!block->overlaps(j.block)) continue;
        for (LinkId l : route.links)
          if (truth_->attacks(state.topology().link(l))) {
            state.forbid(l, j.block);
            forbade = true;
          }
      }
      if (!forbade) min_start = block->start + 1;
    }
  }
  outcome.reason = saw_qot ? BlockReason::qot
                           : (saw_jammed ? BlockReason::jammed : BlockReason::no_spectrum);
  return outcome;
}

}  // namespace eon
