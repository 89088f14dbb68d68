#include <algorithm>
#include <functional>
#include <limits>
#include <random>
#include <set>

#include "doctest.h"
#include "eon/topology.hpp"
#include "test_paths.hpp"

using namespace eon;

namespace {

Topology triangle(double ac) {
  return Topology({"A", "B", "C"}, {{"A", "B", 100}, {"B", "C", 100}, {"A", "C", ac}}, 100);
}

std::vector<std::string> names(const Topology& t, const Route& r) {
  std::vector<std::string> out;
  for (auto n : t.route_nodes(r)) out.push_back(t.node_name(n));
  return out;
}

// Exhaustive simple-path enumeration.
double brute_force_length(const Topology& t, NodeIndex s, NodeIndex d) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> seen(t.node_count(), false);
  std::function<void(NodeIndex, double)> walk = [&](NodeIndex n, double len) {
    if (n == d) {
      best = std::min(best, len);
      return;
    }
    seen[n] = true;
    for (LinkId l : t.outgoing(n)) {
      const Link& link = t.link(l);
      if (!seen[link.destination]) walk(link.destination, len + link.length_km);
    }
    seen[n] = false;
  };
  walk(s, 0.0);
  return best;
}

Topology random_connected(std::mt19937_64& rng, int n) {
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("n" + std::to_string(i));
  std::vector<std::tuple<std::string, std::string, double>> fibers;
  std::set<std::pair<int, int>> used;
  // Small integer lengths so that ties actually happen.
  std::uniform_int_distribution<int> len(1, 4);
  for (int i = 1; i < n; ++i) {
    const int j = std::uniform_int_distribution<int>(0, i - 1)(rng);
    used.insert({j, i});
    fibers.emplace_back(ids[j], ids[i], 100.0 * len(rng));
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (!used.count({a, b}) && std::bernoulli_distribution(0.4)(rng))
        fibers.emplace_back(ids[a], ids[b], 100.0 * len(rng));
  return Topology(ids, fibers, 100);
}

}  // namespace

TEST_CASE("single link of one span") {
  auto t = parse_topology("nodes: A B\nlink: A B 100\n", 100);
  CHECK(t.node_count() == 2);
  CHECK(t.fiber_count() == 1);
  CHECK(t.link_count() == 2);
  CHECK(t.link(0).span_count == 1);
  auto r = shortest_path(t, t.node_index("A"), t.node_index("B"));
  REQUIRE(r.links.size() == 1);
  CHECK(t.link_label(r.links[0]) == "A->B");
}

TEST_CASE("span count is the ceiling of length over span length") {
  auto t = parse_topology("nodes: A B\nlink: A B 250  # comment\n", 100);
  CHECK(t.link(0).span_count == 3);
  CHECK(t.link(1).span_count == 3);
  CHECK(span_count_for(100, 100) == 1);
  CHECK(span_count_for(100.0000000001, 100) == 1);
  CHECK(span_count_for(101, 100) == 2);
  CHECK(span_count_for(1, 100) == 1);
}

TEST_CASE("shipped NSFNet") {
  auto t = load_topology(test_paths::nsfnet, 100);
  CHECK(t.node_count() == 14);
  CHECK(t.fiber_count() == 21);
  CHECK(t.link_count() == 42);
  for (const auto& l : t.links()) {
    CHECK(l.span_count * 100.0 >= l.length_km);
    CHECK(l.length_km > (l.span_count - 1) * 100.0);
    const Link& rev = t.link(l.reverse());
    CHECK(rev.source == l.destination);
    CHECK(rev.destination == l.source);
    CHECK(rev.length_km == l.length_km);
  }
}

TEST_CASE("triangle routing") {
  auto t = triangle(250);
  auto r = shortest_path(t, 0, 2);
  CHECK(names(t, r) == std::vector<std::string>{"A", "B", "C"});
  CHECK(t.route_length_km(r) == doctest::Approx(200));
  auto t2 = triangle(150);
  CHECK(names(t2, shortest_path(t2, 0, 2)) == std::vector<std::string>{"A", "C"});
}

TEST_CASE("equal lengths pick the smaller node sequence") {
  // A-B-D and A-C-D both 200 km.
  Topology t({"A", "B", "C", "D"},
             {{"A", "C", 100}, {"C", "D", 100}, {"A", "B", 100}, {"B", "D", 100}}, 100);
  CHECK(names(t, shortest_path(t, 0, 3)) == std::vector<std::string>{"A", "B", "D"});
  CHECK(names(t, shortest_path(t, 3, 0)) == std::vector<std::string>{"D", "B", "A"});
}

TEST_CASE("shortest path matches exhaustive enumeration and is symmetric") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 5;
    auto t = random_connected(rng, n);
    RouteTable table(t);
    for (NodeIndex s = 0; s < t.node_count(); ++s)
      for (NodeIndex d = 0; d < t.node_count(); ++d) {
        if (s == d) continue;
        const Route& r = table.route(s, d);
        CHECK(t.route_length_km(r) == doctest::Approx(brute_force_length(t, s, d)));
        auto fwd = t.route_nodes(r);
        REQUIRE(fwd.front() == s);
        REQUIRE(fwd.back() == d);
        CHECK(std::set<NodeIndex>(fwd.begin(), fwd.end()).size() == fwd.size());
        auto back = t.route_nodes(table.route(d, s));
        std::reverse(back.begin(), back.end());
        CHECK(back == fwd);
      }
  }
}

TEST_CASE("malformed topologies are rejected") {
  CHECK_THROWS_AS(parse_topology("nodes: A B\nlink: A C 10\n", 100), TopologyError);
  CHECK_THROWS_AS(parse_topology("nodes: A B\nlink: A B 0\n", 100), TopologyError);
  CHECK_THROWS_AS(parse_topology("nodes: A B\nlink: A B -5\n", 100), TopologyError);
  CHECK_THROWS_AS(parse_topology("nodes: A B C\nlink: A B 10\n", 100), TopologyError);
  CHECK_THROWS_AS(parse_topology("nodes: A B\nlink: A B\n", 100), TopologyError);
  CHECK_THROWS_AS(parse_topology("nodes: A B\nlink: A B ten\n", 100), TopologyError);
  CHECK_THROWS_AS(parse_topology("nodes: A A\n", 100), TopologyError);
  CHECK_THROWS_AS(parse_topology("garbage\n", 100), TopologyError);
  CHECK_THROWS_AS(load_topology("/nonexistent/topo.txt", 100), TopologyError);
}

TEST_CASE("link labels") {
  auto t = triangle(250);
  const LinkId bc = t.find_link("B->C");
  CHECK(t.link_label(bc) == "B->C");
  CHECK(t.find_link("B-C") == bc);
  CHECK(t.find_link("C->B") == t.link(bc).reverse());
  CHECK_THROWS(t.find_link("A->Z"));
}
