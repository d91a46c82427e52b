#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rasesim {

using NodeIndex = std::size_t;
using LinkIndex = std::size_t;

struct HostSpec {
  std::string id;
  int cpus = 0;
  double memory_mb = 0.0;
};

struct LinkSpec {
  std::string id;  // empty: derived as "<endpoint_a>-<endpoint_b>"
  std::string endpoint_a;
  std::string endpoint_b;
  double bandwidth_mbps = 0.0;
  double propagation_delay_ms = 0.0;
};

struct NetworkSpec {
  std::vector<HostSpec> hosts;
  std::vector<std::string> switches;
  std::vector<LinkSpec> links;
  std::string ingress_node;  // traffic generator / classifier attachment
  std::string egress_host;   // web server host
};

/// Residual quantities are kept in integer micro-units (1e-6 of a core,
/// MB or Mbps). Conversions round to nearest, so an allocate/release pair of
/// the same amount is an exact no-op.
std::int64_t to_micro_units(double value);
double from_micro_units(std::int64_t units);

/// Substrate graph plus residual CPU, memory and bandwidth.
///
/// Node indices [0, host_count()) are hosts in declaration order, followed
/// by switches. The graph structure is immutable and shared between copies,
/// so copying a network only copies the residual vectors.
class SubstrateNetwork {
 public:
  struct Adjacent {
    LinkIndex link;
    NodeIndex neighbor;
  };

  /// Validates the spec and initializes every residual to full capacity.
  /// Throws Error with DuplicateId, DanglingEndpoint, Disconnected,
  /// NonPositiveCapacity, InvalidValue or UnknownNode/UnknownHost.
  static SubstrateNetwork build(const NetworkSpec& spec);

  const NetworkSpec& spec() const;

  std::size_t node_count() const;
  std::size_t host_count() const;
  std::size_t link_count() const;
  bool is_host(NodeIndex node) const { return node < host_count(); }

  const std::string& node_id(NodeIndex node) const;
  const std::string& link_id(LinkIndex link) const;
  std::optional<NodeIndex> find_node(std::string_view id) const;
  NodeIndex node(std::string_view id) const;  // throws UnknownNode
  NodeIndex host(std::string_view id) const;  // throws UnknownHost
  LinkIndex link(std::string_view id) const;  // throws UnknownLink

  std::span<const Adjacent> adjacent(NodeIndex node) const;
  NodeIndex link_endpoint_a(LinkIndex link) const;
  NodeIndex link_endpoint_b(LinkIndex link) const;
  double propagation_delay_ms(LinkIndex link) const;

  NodeIndex ingress() const;
  NodeIndex egress() const;
  /// Hosts eligible for VNF placement: every host except the ingress and
  /// the web server host, in declaration order.
  std::span<const NodeIndex> compute_hosts() const;

  /// Position of node ids in lexicographic order; used for deterministic
  /// tie-breaking.
  std::size_t id_rank(NodeIndex node) const;

  int cpu_count(NodeIndex host) const;
  double cpu_capacity(NodeIndex host) const;
  double memory_capacity(NodeIndex host) const;
  double bandwidth_capacity(LinkIndex link) const;

  double residual_cpu(NodeIndex host) const;
  double residual_memory(NodeIndex host) const;
  double residual_bandwidth(LinkIndex link) const;
  std::int64_t residual_cpu_units(NodeIndex host) const;
  std::int64_t residual_memory_units(NodeIndex host) const;
  std::int64_t residual_bandwidth_units(LinkIndex link) const;

  /// Allocation requires amount > 0 (InvalidValue otherwise). A failing call
  /// leaves the network unchanged.
  void allocate_cpu(NodeIndex host, double amount);
  void release_cpu(NodeIndex host, double amount);
  void allocate_memory(NodeIndex host, double amount);
  void release_memory(NodeIndex host, double amount);
  void allocate_bandwidth(LinkIndex link, double amount);
  void release_bandwidth(LinkIndex link, double amount);

  void allocate_cpu(std::string_view host, double amount);
  void release_cpu(std::string_view host, double amount);
  void allocate_memory(std::string_view host, double amount);
  void release_memory(std::string_view host, double amount);
  void allocate_bandwidth(std::string_view link, double amount);
  void release_bandwidth(std::string_view link, double amount);

  /// Same structure and bit-identical residuals.
  friend bool operator==(const SubstrateNetwork& a, const SubstrateNetwork& b);

 private:
  struct Structure;

  explicit SubstrateNetwork(std::shared_ptr<const Structure> structure);

  void check_host(NodeIndex host) const;
  void check_link(LinkIndex link) const;

  std::shared_ptr<const Structure> structure_;
  std::vector<std::int64_t> cpu_;
  std::vector<std::int64_t> memory_;
  std::vector<std::int64_t> bandwidth_;
};

inline SubstrateNetwork build_network(const NetworkSpec& spec) {
  return SubstrateNetwork::build(spec);
}

}  // namespace rasesim
