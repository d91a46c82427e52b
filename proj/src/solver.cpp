#include "rasesim/solver.hpp"

#include <algorithm>

#include "rasesim/error.hpp"

namespace rasesim {

std::string describe(const Rejection& rejection) {
  const char* name = rejection.reason == RejectReason::NoFeasibleHost ? "NoFeasibleHost" : "NoPath";
  return std::string{name} + "(" + std::to_string(rejection.index) + ")";
}

std::size_t EmbeddingScheme::accepted_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const Embedding& e) { return e.accepted(); }));
}

std::vector<bool> EmbeddingScheme::outcomes() const {
  std::vector<bool> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.accepted());
  return out;
}

double acceptance_ratio(std::span<const bool> outcomes) {
  if (outcomes.empty()) throw Error(Errc::EmptyInput, "outcomes");
  const auto accepted = std::count(outcomes.begin(), outcomes.end(), true);
  return static_cast<double>(accepted) / static_cast<double>(outcomes.size());
}

double acceptance_ratio(const EmbeddingScheme& scheme) {
  if (scheme.entries.empty()) throw Error(Errc::EmptyInput, "outcomes");
  return static_cast<double>(scheme.accepted_count()) / static_cast<double>(scheme.entries.size());
}

double cpu_demand(const VnfDescriptor& vnf, const SfcRequest& sfcr) {
  return vnf.cpu_per_request * sfcr.traffic.peak_rate();
}

bool host_fits(const SubstrateNetwork& net, NodeIndex host, double cpu, double memory) {
  return net.residual_cpu_units(host) >= to_micro_units(cpu) &&
         net.residual_memory_units(host) >= to_micro_units(memory);
}

namespace {

// Charges recorded while embedding one request, released in reverse on
// rejection.
class ChargeJournal {
 public:
  explicit ChargeJournal(SubstrateNetwork& net) : net_(net) {}

  void cpu(NodeIndex host, double amount) {
    if (amount <= 0) return;
    net_.allocate_cpu(host, amount);
    entries_.push_back({Kind::Cpu, host, amount});
  }
  void memory(NodeIndex host, double amount) {
    if (amount <= 0) return;
    net_.allocate_memory(host, amount);
    entries_.push_back({Kind::Memory, host, amount});
  }
  void bandwidth(LinkIndex link, double amount) {
    if (amount <= 0) return;
    net_.allocate_bandwidth(link, amount);
    entries_.push_back({Kind::Bandwidth, link, amount});
  }

  void rollback() {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
      switch (it->kind) {
        case Kind::Cpu: net_.release_cpu(it->index, it->amount); break;
        case Kind::Memory: net_.release_memory(it->index, it->amount); break;
        case Kind::Bandwidth: net_.release_bandwidth(it->index, it->amount); break;
      }
    }
    entries_.clear();
  }

 private:
  enum class Kind { Cpu, Memory, Bandwidth };
  struct Entry {
    Kind kind;
    std::size_t index;
    double amount;
  };

  SubstrateNetwork& net_;
  std::vector<Entry> entries_;
};

}  // namespace

Embedding embed_sfcr(SubstrateNetwork& net, const SfcRequest& sfcr, const Catalog& catalog,
                     const HostChooser& choose) {
  ChargeJournal journal{net};
  Placement placement;
  placement.hosts.reserve(sfcr.chain.size());

  for (std::size_t pos = 0; pos < sfcr.chain.size(); ++pos) {
    const VnfDescriptor& vnf = catalog.at(sfcr.chain[pos]);
    const double cpu = cpu_demand(vnf, sfcr);
    const auto host = choose(net, pos, cpu, vnf.memory_mb);
    if (!host || !host_fits(net, *host, cpu, vnf.memory_mb)) {
      journal.rollback();
      return {sfcr.id, Rejection{RejectReason::NoFeasibleHost, pos}};
    }
    journal.cpu(*host, cpu);
    journal.memory(*host, vnf.memory_mb);
    placement.hosts.push_back(*host);
  }

  std::vector<NodeIndex> waypoints;
  waypoints.reserve(placement.hosts.size() + 2);
  waypoints.push_back(net.ingress());
  waypoints.insert(waypoints.end(), placement.hosts.begin(), placement.hosts.end());
  waypoints.push_back(net.egress());

  for (std::size_t seg = 0; seg + 1 < waypoints.size(); ++seg) {
    try {
      Path path = shortest_path(net, waypoints[seg], waypoints[seg + 1], sfcr.bandwidth_demand_mbps);
      for (LinkIndex l : path.links) journal.bandwidth(l, sfcr.bandwidth_demand_mbps);
      placement.segments.push_back(std::move(path));
    } catch (const Error& e) {
      if (e.code() != Errc::NoPath) throw;
      journal.rollback();
      return {sfcr.id, Rejection{RejectReason::NoPath, seg}};
    }
  }
  return {sfcr.id, std::move(placement)};
}

EmbeddingScheme solve_simple_dijkstra(SubstrateNetwork& net, std::span<const SfcRequest> sfcrs,
                                      const Catalog& catalog) {
  const HostChooser most_residual_cpu = [](const SubstrateNetwork& n, std::size_t, double cpu,
                                           double memory) -> std::optional<NodeIndex> {
    std::optional<NodeIndex> chosen;
    for (NodeIndex h : n.compute_hosts()) {
      if (!host_fits(n, h, cpu, memory)) continue;
      if (!chosen) {
        chosen = h;
        continue;
      }
      const auto r = n.residual_cpu_units(h);
      const auto best = n.residual_cpu_units(*chosen);
      if (r > best || (r == best && n.node_id(h) < n.node_id(*chosen))) chosen = h;
    }
    return chosen;
  };

  EmbeddingScheme scheme;
  scheme.entries.reserve(sfcrs.size());
  for (const auto& sfcr : sfcrs) scheme.entries.push_back(embed_sfcr(net, sfcr, catalog, most_residual_cpu));
  return scheme;
}

std::weak_ordering compare_fitness(const Fitness& a, const Fitness& b) {
  if (a.acceptance_ratio != b.acceptance_ratio) {
    return a.acceptance_ratio > b.acceptance_ratio ? std::weak_ordering::greater : std::weak_ordering::less;
  }
  if (a.acceptance_ratio <= 0) return std::weak_ordering::equivalent;
  // A missing latency with accepted chains should not happen; treat it as worst.
  if (!a.mean_latency_ms || !b.mean_latency_ms) {
    if (a.mean_latency_ms.has_value() == b.mean_latency_ms.has_value()) return std::weak_ordering::equivalent;
    return a.mean_latency_ms ? std::weak_ordering::greater : std::weak_ordering::less;
  }
  if (*a.mean_latency_ms < *b.mean_latency_ms) return std::weak_ordering::greater;
  if (*a.mean_latency_ms > *b.mean_latency_ms) return std::weak_ordering::less;
  return std::weak_ordering::equivalent;
}

}  // namespace rasesim
