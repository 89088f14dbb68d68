#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace eon {

using NodeIndex = std::uint32_t;
using LinkId = std::uint32_t;

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One direction of a fiber. Both directions of fiber `k` have ids 2k and 2k+1
/// and share length and span count; each direction owns its own slot grid.
struct Link {
  LinkId id = 0;
  NodeIndex source = 0;
  NodeIndex destination = 0;
  double length_km = 0.0;
  int span_count = 1;

  std::uint32_t fiber() const { return id / 2; }
  LinkId reverse() const { return id ^ 1u; }
};

struct Route {
  NodeIndex source = 0;
  NodeIndex destination = 0;
  std::vector<LinkId> links;
};

class Topology {
 public:
  Topology(std::vector<std::string> node_names,
           std::vector<std::tuple<std::string, std::string, double>> fibers,
           double span_length_km);

  std::size_t node_count() const { return names_.size(); }
  std::size_t link_count() const { return links_.size(); }
  std::size_t fiber_count() const { return links_.size() / 2; }

  const std::vector<Link>& links() const { return links_; }
  const Link& link(LinkId id) const { return links_.at(id); }
  const std::string& node_name(NodeIndex n) const { return names_.at(n); }
  NodeIndex node_index(std::string_view name) const;

  /// "A->B" style label for CSV output.
  std::string link_label(LinkId id) const;
  /// Accepts "A->B" or "A-B" (the latter meaning A->B).
  LinkId find_link(std::string_view label) const;

  /// Links leaving `n`, in declaration order.
  const std::vector<LinkId>& outgoing(NodeIndex n) const { return adjacency_.at(n); }

  double route_length_km(const Route& route) const;
  int route_span_count(const Route& route) const;
  std::vector<NodeIndex> route_nodes(const Route& route) const;

 private:
  std::vector<std::string> names_;
  std::map<std::string, NodeIndex, std::less<>> by_name_;
  std::vector<Link> links_;
  std::vector<std::vector<LinkId>> adjacency_;
};

/// Parses the line-oriented topology format:
///   nodes: <id> <id> ...
///   link: <src> <dst> <length_km>
/// `#` starts a comment. Every `link:` line declares one bidirectional fiber.
Topology parse_topology(std::string_view document, double span_length_km);
Topology load_topology(const std::string& path, double span_length_km);

int span_count_for(double length_km, double span_length_km);

/// Minimum-length route. Among equal-length routes the lexicographically
/// smallest node-index sequence (read from the lower-index endpoint) wins, so
/// that the route for (d, s) is the exact reverse of the route for (s, d).
Route shortest_path(const Topology& topology, NodeIndex source, NodeIndex destination);

/// Routes for every ordered node pair, computed once. Immutable afterwards.
class RouteTable {
 public:
  explicit RouteTable(const Topology& topology);
  const Route& route(NodeIndex source, NodeIndex destination) const;

 private:
  std::size_t n_;
  std::vector<Route> routes_;
};

}  // namespace eon
