#pragma once

#include <string_view>
#include <vector>

#include "rasesim/topology.hpp"

namespace rasesim {

/// A simple path through the substrate. links[i] joins nodes[i] and nodes[i+1].
struct Path {
  std::vector<NodeIndex> nodes;
  std::vector<LinkIndex> links;
  double propagation_ms = 0.0;

  friend bool operator==(const Path&, const Path&) = default;
};

/// Minimum-propagation-delay path from src to dst over links whose residual
/// bandwidth is at least min_bandwidth_mbps. Ties are broken by hop count,
/// then by the lexicographic sequence of node ids. Throws NoPath when the
/// bandwidth filter disconnects src from dst.
Path shortest_path(const SubstrateNetwork& net, NodeIndex src, NodeIndex dst, double min_bandwidth_mbps);

/// Id-based overload; throws UnknownNode for undeclared endpoints.
Path shortest_path(const SubstrateNetwork& net, std::string_view src, std::string_view dst,
                   double min_bandwidth_mbps);

std::vector<std::string> node_ids(const SubstrateNetwork& net, const Path& path);

}  // namespace rasesim
