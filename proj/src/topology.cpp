#include "eon/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <queue>
#include <sstream>

namespace eon {

int span_count_for(double length_km, double span_length_km) {
  if (!(span_length_km > 0.0)) throw TopologyError("span length must be positive");
  const double ratio = length_km / span_length_km;
  // Lengths like 300 km with 100 km spans must give exactly 3.
  const double rounded = std::round(ratio);
  const int spans = std::abs(ratio - rounded) < 1e-9 ? static_cast<int>(rounded)
                                                     : static_cast<int>(std::ceil(ratio));
  return std::max(spans, 1);
}

Topology::Topology(std::vector<std::string> node_names,
                   std::vector<std::tuple<std::string, std::string, double>> fibers,
                   double span_length_km)
    : names_(std::move(node_names)) {
  if (names_.empty()) throw TopologyError("topology declares no nodes");
  for (NodeIndex i = 0; i < names_.size(); ++i) {
    if (!by_name_.emplace(names_[i], i).second)
      throw TopologyError("duplicate node '" + names_[i] + "'");
  }
  adjacency_.resize(names_.size());
  for (const auto& [a, b, length] : fibers) {
    auto ia = by_name_.find(a);
    auto ib = by_name_.find(b);
    if (ia == by_name_.end()) throw TopologyError("link endpoint '" + a + "' is not a declared node");
    if (ib == by_name_.end()) throw TopologyError("link endpoint '" + b + "' is not a declared node");
    if (ia->second == ib->second) throw TopologyError("self-loop link at '" + a + "'");
    if (!(length > 0.0) || !std::isfinite(length))
      throw TopologyError("link " + a + "-" + b + " has non-positive length");
    const int spans = span_count_for(length, span_length_km);
    const auto id = static_cast<LinkId>(links_.size());
    links_.push_back(Link{id, ia->second, ib->second, length, spans});
    links_.push_back(Link{id + 1, ib->second, ia->second, length, spans});
    adjacency_[ia->second].push_back(id);
    adjacency_[ib->second].push_back(id + 1);
  }

  // Connectivity: BFS from node 0.
  std::vector<bool> seen(names_.size(), false);
  std::vector<NodeIndex> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const NodeIndex u = stack.back();
    stack.pop_back();
    for (LinkId l : adjacency_[u]) {
      const NodeIndex v = links_[l].destination;
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  for (NodeIndex i = 0; i < names_.size(); ++i)
    if (!seen[i]) throw TopologyError("topology is disconnected: node '" + names_[i] + "' unreachable");
}

NodeIndex Topology::node_index(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw TopologyError("unknown node '" + std::string(name) + "'");
  return it->second;
}

std::string Topology::link_label(LinkId id) const {
  const Link& l = link(id);
  return names_[l.source] + "->" + names_[l.destination];
}

LinkId Topology::find_link(std::string_view label) const {
  std::string_view a, b;
  if (auto p = label.find("->"); p != std::string_view::npos) {
    a = label.substr(0, p);
    b = label.substr(p + 2);
  } else if (auto q = label.find('-'); q != std::string_view::npos) {
    a = label.substr(0, q);
    b = label.substr(q + 1);
  } else {
    throw TopologyError("malformed link label '" + std::string(label) + "'");
  }
  const NodeIndex s = node_index(a);
  const NodeIndex d = node_index(b);
  for (LinkId l : adjacency_[s])
    if (links_[l].destination == d) return l;
  throw TopologyError("no link '" + std::string(label) + "' in topology");
}

double Topology::route_length_km(const Route& route) const {
  double total = 0.0;
  for (LinkId l : route.links) total += link(l).length_km;
  return total;
}

int Topology::route_span_count(const Route& route) const {
  int total = 0;
  for (LinkId l : route.links) total += link(l).span_count;
  return total;
}

std::vector<NodeIndex> Topology::route_nodes(const Route& route) const {
  std::vector<NodeIndex> nodes{route.source};
  for (LinkId l : route.links) nodes.push_back(link(l).destination);
  return nodes;
}

namespace {

std::string strip_comment(std::string line) {
  if (auto p = line.find('#'); p != std::string::npos) line.erase(p);
  return line;
}

}  // namespace

Topology parse_topology(std::string_view document, double span_length_km) {
  std::vector<std::string> nodes;
  std::vector<std::tuple<std::string, std::string, double>> fibers;
  bool have_nodes = false;

  std::istringstream in{std::string(document)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::istringstream line(strip_comment(raw));
    std::string key;
    if (!(line >> key)) continue;
    auto fail = [&](const std::string& what) {
      return TopologyError("topology line " + std::to_string(line_no) + ": " + what);
    };
    if (key == "nodes:") {
      if (have_nodes) throw fail("duplicate 'nodes:' line");
      have_nodes = true;
      std::string id;
      while (line >> id) nodes.push_back(id);
      if (nodes.empty()) throw fail("'nodes:' lists no nodes");
    } else if (key == "link:") {
      if (!have_nodes) throw fail("'link:' before 'nodes:'");
      std::string a, b, length_text, extra;
      if (!(line >> a >> b >> length_text) || (line >> extra))
        throw fail("expected 'link: <src> <dst> <length_km>'");
      double length = 0.0;
      try {
        std::size_t used = 0;
        length = std::stod(length_text, &used);
        if (used != length_text.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw fail("bad length '" + length_text + "'");
      }
      fibers.emplace_back(a, b, length);
    } else {
      throw fail("unknown directive '" + key + "'");
    }
  }
  if (!have_nodes) throw TopologyError("topology has no 'nodes:' line");
  return Topology(std::move(nodes), std::move(fibers), span_length_km);
}

Topology load_topology(const std::string& path, double span_length_km) {
  std::ifstream file(path);
  if (!file) throw TopologyError("cannot open topology file '" + path + "'");
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_topology(buffer.str(), span_length_km);
}

namespace {

std::vector<double> distances_to(const Topology& topology, NodeIndex target) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(topology.node_count(), inf);
  using Item = std::pair<double, NodeIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[target] = 0.0;
  queue.emplace(0.0, target);
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    // Lengths are symmetric, so outgoing links serve as incoming ones.
    for (LinkId l : topology.outgoing(u)) {
      const Link& link = topology.link(l);
      const double nd = d + link.length_km;
      if (nd < dist[link.destination]) {
        dist[link.destination] = nd;
        queue.emplace(nd, link.destination);
      }
    }
  }
  return dist;
}

bool same_length(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

Route shortest_path(const Topology& topology, NodeIndex source, NodeIndex destination) {
  if (source >= topology.node_count() || destination >= topology.node_count())
    throw TopologyError("shortest_path: node out of range");
  if (source == destination) throw TopologyError("shortest_path: source equals destination");

  const NodeIndex from = std::min(source, destination);
  const NodeIndex to = std::max(source, destination);
  const auto dist = distances_to(topology, to);
  if (!std::isfinite(dist[from]))
    throw TopologyError("no path between '" + topology.node_name(source) + "' and '" +
                        topology.node_name(destination) + "'");

  Route forward{from, to, {}};
  NodeIndex u = from;
  while (u != to) {
    std::optional<LinkId> best;
    for (LinkId l : topology.outgoing(u)) {
      const Link& link = topology.link(l);
      if (!same_length(link.length_km + dist[link.destination], dist[u])) continue;
      if (!best) {
        best = l;
        continue;
      }
      const Link& cur = topology.link(*best);
      if (link.destination < cur.destination ||
          (link.destination == cur.destination && link.length_km < cur.length_km))
        best = l;
    }
    if (!best) throw TopologyError("shortest_path: inconsistent distance labels");
    forward.links.push_back(*best);
    u = topology.link(*best).destination;
  }

  if (source == from) return forward;
  Route backward{source, destination, {}};
  for (auto it = forward.links.rbegin(); it != forward.links.rend(); ++it)
    backward.links.push_back(topology.link(*it).reverse());
  return backward;
}

RouteTable::RouteTable(const Topology& topology) : n_(topology.node_count()), routes_(n_ * n_) {
  for (NodeIndex s = 0; s < n_; ++s)
    for (NodeIndex d = s + 1; d < n_; ++d) {
      routes_[s * n_ + d] = shortest_path(topology, s, d);
      routes_[d * n_ + s] = shortest_path(topology, d, s);
    }
}

const Route& RouteTable::route(NodeIndex source, NodeIndex destination) const {
  if (source == destination || source >= n_ || destination >= n_)
    throw TopologyError("RouteTable: invalid node pair");
  return routes_[source * n_ + destination];
}

}  // namespace eon
