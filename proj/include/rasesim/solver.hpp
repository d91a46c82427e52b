#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rasesim/catalog.hpp"
#include "rasesim/routing.hpp"
#include "rasesim/topology.hpp"

namespace rasesim {

/// Where each VNF of an accepted request runs, and the routed segments
/// ingress -> host(v1) -> ... -> host(vk) -> egress.
struct Placement {
  std::vector<NodeIndex> hosts;
  std::vector<Path> segments;

  friend bool operator==(const Placement&, const Placement&) = default;
};

enum class RejectReason { NoFeasibleHost, NoPath };

struct Rejection {
  RejectReason reason = RejectReason::NoFeasibleHost;
  std::size_t index = 0;  // chain position for NoFeasibleHost, segment for NoPath

  friend bool operator==(const Rejection&, const Rejection&) = default;
};

/// "NoFeasibleHost(2)" / "NoPath(1)".
std::string describe(const Rejection& rejection);

struct Embedding {
  std::string sfcr_id;
  std::variant<Placement, Rejection> outcome;

  bool accepted() const { return std::holds_alternative<Placement>(outcome); }
  const Placement& placement() const { return std::get<Placement>(outcome); }
  const Rejection& rejection() const { return std::get<Rejection>(outcome); }

  friend bool operator==(const Embedding&, const Embedding&) = default;
};

struct EmbeddingScheme {
  std::vector<Embedding> entries;

  std::size_t accepted_count() const;
  std::vector<bool> outcomes() const;

  friend bool operator==(const EmbeddingScheme&, const EmbeddingScheme&) = default;
};

/// accepted / total. Throws EmptyInput on an empty list.
double acceptance_ratio(std::span<const bool> outcomes);
double acceptance_ratio(const EmbeddingScheme& scheme);

/// CPU cores reserved for one VNF instance: cpu_per_request x peak rate.
double cpu_demand(const VnfDescriptor& vnf, const SfcRequest& sfcr);

/// Chooses the host for chain position `position`, or nullopt when none is
/// feasible. Receives the network as charged so far.
using HostChooser = std::function<std::optional<NodeIndex>(const SubstrateNetwork& net, std::size_t position,
                                                           double cpu, double memory)>;

/// True when `host` has residual CPU and memory for the demands.
bool host_fits(const SubstrateNetwork& net, NodeIndex host, double cpu, double memory);

/// Places every VNF of `sfcr` with `choose`, then routes consecutive
/// placements with shortest_path and charges bandwidth on each segment. On
/// any failure all charges made for this request are released and the
/// rejection is returned; the network is then bit-identical to its state on
/// entry.
Embedding embed_sfcr(SubstrateNetwork& net, const SfcRequest& sfcr, const Catalog& catalog,
                     const HostChooser& choose);

/// Greedy placement (feasible compute host with the most residual CPU,
/// ties to the lowest host id) followed by shortest-path linking, in
/// submission order. Rejections are recorded, never thrown.
EmbeddingScheme solve_simple_dijkstra(SubstrateNetwork& net, std::span<const SfcRequest> sfcrs,
                                      const Catalog& catalog);

/// Joint objective: acceptance ratio first, then mean latency over the
/// accepted chains. Undefined latency (nothing accepted) is encoded as
/// nullopt.
struct Fitness {
  double acceptance_ratio = 0.0;
  std::optional<double> mean_latency_ms;

  friend bool operator==(const Fitness&, const Fitness&) = default;
};

/// Orders a relative to b by quality: `greater` means a is better. Higher
/// acceptance wins; on equal acceptance lower latency wins; acceptance 0
/// compares worst and all such candidates are equivalent.
std::weak_ordering compare_fitness(const Fitness& a, const Fitness& b);

inline bool is_better(const Fitness& a, const Fitness& b) { return compare_fitness(a, b) > 0; }

}  // namespace rasesim
