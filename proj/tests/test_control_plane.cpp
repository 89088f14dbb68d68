#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "eon/control_plane.hpp"
#include "eon/sim.hpp"
#include "phy_oracle.hpp"
#include "test_paths.hpp"

using namespace eon;

namespace {

const PhyParams kParams;

Topology pair_topology(double km) { return Topology({"A", "B"}, {{"A", "B", km}}, 100); }

Topology chain() {
  return Topology({"A", "B", "C", "D"}, {{"A", "B", 300}, {"B", "C", 200}, {"C", "D", 400}}, 100);
}

GroundTruth truth_on(const Topology& t, const std::string& link, double eps_db) {
  JammerConfig c;
  c.selector = TargetSelector::explicit_link;
  c.explicit_link = link;
  c.epsilon_db = eps_db;
  return ground_truth_channels(c, t.find_link(link), kParams);
}

Request req(NodeIndex s, NodeIndex d, double gbps) { return Request{s, d, gbps, 0.0, 100.0}; }

}  // namespace

TEST_CASE("required slots") {
  CHECK(required_slots(40, modulation_by_name("BPSK"), kParams) == 4);
  CHECK(required_slots(400, modulation_by_name("64QAM"), kParams) == 6);
  CHECK(required_slots(200, modulation_by_name("QPSK"), kParams) == 8);
  CHECK(required_slots(37.5, modulation_by_name("8QAM"), kParams) == 1);
  CHECK(required_slots(12.5, modulation_by_name("BPSK"), kParams) == 1);
}

TEST_CASE("mode names") {
  CHECK(parse_control_mode("aware") == ControlMode::aware);
  CHECK(to_string(ControlMode::no_jamming) == "no_jamming");
  CHECK_THROWS(parse_control_mode("paranoid"));
  CHECK(to_string(BlockReason::jammed) == "jammed");
}

TEST_CASE("empty one-span network takes the best modulation the oracle allows, at slot 0") {
  auto t = pair_topology(100);
  RouteTable routes(t);
  for (double gbps : {40.0, 200.0, 400.0}) {
    NetworkState state(t, kParams);
    ControlPlane cp(routes, ControlMode::no_jamming, nullptr);
    const Modulation* expected = nullptr;
    for (auto m = modulation_table().rbegin(); m != modulation_table().rend(); ++m) {
      const int w = required_slots(gbps, *m, kParams);
      const double s = oracle::snr({0, w, 1e-3}, {{1, {}, false}}, nullptr);
      if (10 * std::log10(s) >= m->snr_threshold_db) {
        expected = &*m;
        break;
      }
    }
    REQUIRE(expected);
    auto out = cp.handle_request(req(0, 1, gbps), 1, state);
    REQUIRE(out.established);
    CHECK(out.established->modulation->name == expected->name);
    CHECK(out.established->block.start == 0);
    CHECK(out.established->block.width == required_slots(gbps, *expected, kParams));
    CHECK(state.grid(0).used_count() == out.established->block.width);
    CHECK(state.grid(1).used_count() == 0);
  }
}

TEST_CASE("full spectrum blocks with no_spectrum") {
  auto t = pair_topology(100);
  RouteTable routes(t);
  NetworkState state(t, kParams);
  ControlPlane cp(routes, ControlMode::no_jamming, nullptr);
  Lightpath lp{7, routes.route(0, 1), {0, 320}, &modulation_by_name("BPSK"), 40, 0, 1};
  const Channel ch = make_channel({0, 320}, kParams.tx_power_w(), kParams);
  state.establish(lp, ch, state.fresh_noise(ch, lp.route, nullptr), {});
  auto out = cp.handle_request(req(0, 1, 40), 8, state);
  CHECK_FALSE(out.established);
  CHECK(out.reason == BlockReason::no_spectrum);
  CHECK(out.evaluations == 0);
}

TEST_CASE("a candidate that would push an existing circuit below threshold is rejected") {
  // Find a link length where an 8QAM circuit on slots 0-1 passes alone but
  // fails once a 4-slot neighbour sits at slot 4; checked with the oracle.
  const oracle::Ch existing{0, 2, 1e-3}, neighbour{4, 4, 1e-3};
  int spans = 0;
  for (int n = 1; n < 400 && !spans; ++n) {
    const double alone = 10 * std::log10(oracle::snr(existing, {{n, {}, false}}, nullptr));
    const double with = 10 * std::log10(oracle::snr(existing, {{n, {neighbour}, false}}, nullptr));
    const double cand = 10 * std::log10(oracle::snr(neighbour, {{n, {existing}, false}}, nullptr));
    if (alone >= 12 && with < 12 && cand >= 9) spans = n;
  }
  REQUIRE(spans > 0);
  auto t = pair_topology(spans * 100.0);
  RouteTable routes(t);
  NetworkState state(t, kParams);
  ControlPlane cp(routes, ControlMode::no_jamming, nullptr);
  const Route& r = routes.route(0, 1);
  Lightpath lp{1, r, {0, 2}, &modulation_by_name("8QAM"), 40, 0, 100};
  const Channel ch = make_channel(lp.block, kParams.tx_power_w(), kParams);
  state.establish(lp, ch, state.fresh_noise(ch, r, nullptr), {});
  CHECK(qot_verdict(state.cached_snr(1), *lp.modulation));

  auto ev = cp.evaluate_candidate({r, {4, 4}, &modulation_by_name("BPSK")}, state);
  CHECK(ev.verdict == Verdict::reject_qot);
  // Far away the same candidate is fine.
  auto far = cp.evaluate_candidate({r, {200, 4}, &modulation_by_name("BPSK")}, state);
  CHECK(far.verdict == Verdict::accept);
}

TEST_CASE("candidate on a jammer-free route is judged by QoT alone") {
  auto t = chain();
  RouteTable routes(t);
  auto truth = truth_on(t, "C->D", 5);
  NetworkState state(t, kParams);
  ControlPlane cp(routes, ControlMode::aware, &truth);
  const Route& r = routes.route(0, 2);
  for (const auto& m : modulation_table()) {
    const int w = required_slots(200, m, kParams);
    auto ev = cp.evaluate_candidate({r, {52, w}, &m}, state);
    const double s = oracle::snr({52, w, 1e-3}, {{3, {}, false}, {2, {}, false}}, nullptr);
    CHECK((ev.verdict == Verdict::accept) == (10 * std::log10(s) >= m.snr_threshold_db));
    CHECK_FALSE(cp.detect_jamming({r, {52, w}, &m}, state));
  }
}

TEST_CASE("jamming detection") {
  auto t = chain();
  RouteTable routes(t);
  NetworkState state(t, kParams);
  const Route& r = routes.route(1, 3);  // crosses C->D
  const Modulation& bpsk = modulation_by_name("BPSK");

  auto none = truth_on(t, "D->C", 0);
  ControlPlane zero(routes, ControlMode::aware, &none);
  CHECK_FALSE(zero.detect_jamming({r, {52, 4}, &bpsk}, state));
  CHECK(zero.evaluate_candidate({r, {52, 4}, &bpsk}, state).verdict != Verdict::reject_jammed);

  auto five = truth_on(t, "D->C", 5);
  ControlPlane cp(routes, ControlMode::aware, &five);
  CHECK(cp.detect_jamming({r, {52, 4}, &bpsk}, state));
  CHECK(cp.evaluate_candidate({r, {52, 4}, &bpsk}, state).verdict == Verdict::reject_jammed);
  CHECK_FALSE(cp.detect_jamming({routes.route(0, 2), {52, 4}, &bpsk}, state));

  // Adjacent, out of band: the oracle's SNR gap decides.
  const oracle::Ch adj{60, 4, 1e-3};
  const double eps = 1e-3 * (std::pow(10.0, 0.5) - 1);
  const oracle::Jam jam{{{50, 10, 1e-3}, {140, 10, 1e-3}, {230, 10, 1e-3}}, eps};
  const std::vector<oracle::Hop> hops{{2, {}, false}, {4, {}, true}};
  const double gap = 10 * std::log10(oracle::snr(adj, hops, nullptr) / oracle::snr(adj, hops, &jam));
  CHECK(gap > 0.1);
  CHECK(cp.detect_jamming({r, {60, 4}, &bpsk}, state));

  // Unaware controllers never report jamming as the reason.
  ControlPlane blind(routes, ControlMode::unaware, &five);
  CHECK(blind.evaluate_candidate({r, {52, 4}, &bpsk}, state).verdict != Verdict::reject_jammed);
}

TEST_CASE("aware controller forbids the jammed range on both directions and lands elsewhere") {
  auto t = chain();
  RouteTable routes(t);
  // At 1 dB only channels near a jammed range see a gap above the tolerance.
  auto truth = truth_on(t, "C->D", 1);
  NetworkState state(t, kParams);
  ControlPlane cp(routes, ControlMode::aware, &truth);
  const LinkId cd = t.find_link("C->D");
  // Push first fit up against the first jammed range.
  Lightpath filler{100, routes.route(2, 3), {0, 46}, &modulation_by_name("BPSK"), 0, 0, 1e9};
  const Channel fch = make_channel(filler.block, kParams.tx_power_w(), kParams);
  state.establish(filler, fch, state.fresh_noise(fch, filler.route, &truth), {});

  auto out = cp.handle_request(req(2, 3, 40), 1, state);
  REQUIRE(out.established);
  for (const auto& j : truth.channels) CHECK_FALSE(out.established->block.overlaps(j.block));
  CHECK(state.grid(cd).is_flagged_forbidden(55));
  CHECK(state.grid(t.link(cd).reverse()).is_flagged_forbidden(55));
  CHECK_FALSE(state.grid(t.find_link("A->B")).is_flagged_forbidden(55));
  CHECK(out.evaluations >= 2);
  for (const auto& e : state.forbidden_registry()) {
    CHECK(t.link(e.link).fiber() == t.link(cd).fiber());
    CHECK(e.block == SlotBlock{50, 10});
  }
}

TEST_CASE("release restores the grids and refreshes neighbours") {
  auto t = chain();
  RouteTable routes(t);
  NetworkState state(t, kParams);
  ControlPlane cp(routes, ControlMode::no_jamming, nullptr);
  std::vector<LightpathId> ids;
  for (LightpathId i = 0; i < 6; ++i) {
    auto out = cp.handle_request(req(i % 2 ? 1 : 0, i % 3 ? 2 : 3, 40), i, state);
    if (out.established) ids.push_back(i);
  }
  REQUIRE(ids.size() >= 3);
  state.release(ids[0], 10.0);
  for (LightpathId id : ids)
    if (id != ids[0]) {
      const auto& a = state.active(id);
      const auto fresh = state.fresh_noise(a.channel, a.path.route, nullptr, id);
      CHECK(a.noise.total() == doctest::Approx(fresh.total()).epsilon(1e-12));
    }
  for (std::size_t k = 1; k < ids.size(); ++k) state.release(ids[k], 20.0);
  for (LinkId l = 0; l < t.link_count(); ++l) CHECK(state.grid(l).used_count() == 0);
  CHECK(state.active().empty());
}

TEST_CASE("evaluations per request stay under modulations times slots") {
  auto t = Topology({"A", "B", "C"}, {{"A", "B", 100}, {"B", "C", 100}, {"A", "C", 100}}, 100);
  RouteTable routes(t);
  for (ControlMode mode : {ControlMode::unaware, ControlMode::aware}) {
    auto truth = truth_on(t, "A->B", 5);
    NetworkState state(t, kParams);
    ControlPlane cp(routes, mode, &truth);
    TrafficModel traffic;
    RequestGenerator gen(3, t.node_count(), traffic);
    int blocked = 0;
    for (LightpathId i = 0; i < 2000; ++i) {
      auto out = cp.handle_request(gen.next(), i, state);
      CHECK(out.evaluations <= static_cast<int>(modulation_table().size()) * 320);
      blocked += !out.established;
    }
    CHECK(blocked > 0);
  }
}
