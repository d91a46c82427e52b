#include "rasesim/routing.hpp"

#include <algorithm>
#include <optional>
#include <queue>

#include "rasesim/error.hpp"

namespace rasesim {

namespace {

// A tentative route to `nodes.back()`. Ordered by (delay, hops, id ranks);
// the key only grows under extension, so the first label popped for a node
// is its optimum.
struct Label {
  double delay = 0.0;
  std::vector<NodeIndex> nodes;
  std::vector<std::size_t> ranks;
  std::vector<LinkIndex> links;
};

bool better(const Label& x, const Label& y) {
  if (x.delay != y.delay) return x.delay < y.delay;
  if (x.links.size() != y.links.size()) return x.links.size() < y.links.size();
  return x.ranks < y.ranks;
}

struct WorseFirst {
  bool operator()(const Label& x, const Label& y) const { return better(y, x); }
};

}  // namespace

Path shortest_path(const SubstrateNetwork& net, NodeIndex src, NodeIndex dst, double min_bandwidth_mbps) {
  if (src >= net.node_count()) throw Error(Errc::UnknownNode, "#" + std::to_string(src));
  if (dst >= net.node_count()) throw Error(Errc::UnknownNode, "#" + std::to_string(dst));
  const std::int64_t min_units = to_micro_units(std::max(0.0, min_bandwidth_mbps));

  std::vector<std::optional<Label>> best(net.node_count());
  std::vector<bool> settled(net.node_count(), false);
  std::priority_queue<Label, std::vector<Label>, WorseFirst> frontier;

  Label start;
  start.nodes = {src};
  start.ranks = {net.id_rank(src)};
  best[src] = start;
  frontier.push(std::move(start));

  while (!frontier.empty()) {
    Label cur = frontier.top();
    frontier.pop();
    const NodeIndex at = cur.nodes.back();
    if (settled[at]) continue;
    settled[at] = true;
    if (at == dst) {
      return Path{std::move(cur.nodes), std::move(cur.links), cur.delay};
    }
    for (const auto& adj : net.adjacent(at)) {
      if (settled[adj.neighbor]) continue;
      if (net.residual_bandwidth_units(adj.link) < min_units) continue;
      Label next = cur;
      next.delay += net.propagation_delay_ms(adj.link);
      next.nodes.push_back(adj.neighbor);
      next.ranks.push_back(net.id_rank(adj.neighbor));
      next.links.push_back(adj.link);
      auto& slot = best[adj.neighbor];
      if (!slot || better(next, *slot)) {
        slot = next;
        frontier.push(std::move(next));
      }
    }
  }
  throw Error(Errc::NoPath, net.node_id(src) + "->" + net.node_id(dst),
              "no route with residual bandwidth >= " + std::to_string(min_bandwidth_mbps) + " Mbps");
}

Path shortest_path(const SubstrateNetwork& net, std::string_view src, std::string_view dst,
                   double min_bandwidth_mbps) {
  return shortest_path(net, net.node(src), net.node(dst), min_bandwidth_mbps);
}

std::vector<std::string> node_ids(const SubstrateNetwork& net, const Path& path) {
  std::vector<std::string> ids;
  ids.reserve(path.nodes.size());
  for (NodeIndex n : path.nodes) ids.push_back(net.node_id(n));
  return ids;
}

}  // namespace rasesim
