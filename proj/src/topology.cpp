#include "rasesim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "rasesim/error.hpp"

namespace rasesim {

std::int64_t to_micro_units(double value) { return std::llround(value * 1e6); }

double from_micro_units(std::int64_t units) { return static_cast<double>(units) / 1e6; }

struct SubstrateNetwork::Structure {
  NetworkSpec spec;
  std::vector<std::string> node_ids;
  std::vector<std::string> link_ids;
  std::unordered_map<std::string, NodeIndex> node_lookup;
  std::unordered_map<std::string, LinkIndex> link_lookup;
  std::vector<std::vector<Adjacent>> adjacency;
  std::vector<NodeIndex> endpoint_a;
  std::vector<NodeIndex> endpoint_b;
  std::vector<std::size_t> rank;
  std::vector<NodeIndex> compute_hosts;
  std::vector<std::int64_t> cpu_capacity;
  std::vector<std::int64_t> memory_capacity;
  std::vector<std::int64_t> bandwidth_capacity;
  NodeIndex ingress = 0;
  NodeIndex egress = 0;
};

namespace {

void check_connected(const std::vector<std::vector<SubstrateNetwork::Adjacent>>& adjacency,
                     const std::vector<std::string>& node_ids) {
  if (adjacency.empty()) return;
  std::vector<bool> seen(adjacency.size(), false);
  std::vector<NodeIndex> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const NodeIndex n = stack.back();
    stack.pop_back();
    for (const auto& adj : adjacency[n]) {
      if (!seen[adj.neighbor]) {
        seen[adj.neighbor] = true;
        stack.push_back(adj.neighbor);
      }
    }
  }
  for (NodeIndex n = 0; n < seen.size(); ++n) {
    if (!seen[n]) throw Error(Errc::Disconnected, node_ids[n], "node unreachable from " + node_ids[0]);
  }
}

}  // namespace

SubstrateNetwork SubstrateNetwork::build(const NetworkSpec& spec) {
  auto s = std::make_shared<Structure>();
  s->spec = spec;

  std::unordered_set<std::string> all_ids;
  auto claim = [&](const std::string& id) {
    if (id.empty()) throw Error(Errc::InvalidValue, id, "empty id");
    if (!all_ids.insert(id).second) throw Error(Errc::DuplicateId, id);
  };

  for (const auto& h : spec.hosts) {
    claim(h.id);
    if (h.cpus <= 0) throw Error(Errc::NonPositiveCapacity, h.id, "cpus must be positive");
    if (!(h.memory_mb > 0)) throw Error(Errc::NonPositiveCapacity, h.id, "memory must be positive");
    s->node_lookup.emplace(h.id, s->node_ids.size());
    s->node_ids.push_back(h.id);
    s->cpu_capacity.push_back(to_micro_units(h.cpus));
    s->memory_capacity.push_back(to_micro_units(h.memory_mb));
  }
  for (const auto& sw : spec.switches) {
    claim(sw);
    s->node_lookup.emplace(sw, s->node_ids.size());
    s->node_ids.push_back(sw);
  }

  s->adjacency.resize(s->node_ids.size());
  for (auto& l : s->spec.links) {
    if (l.id.empty()) l.id = l.endpoint_a + "-" + l.endpoint_b;
    claim(l.id);
    const auto a = s->node_lookup.find(l.endpoint_a);
    if (a == s->node_lookup.end()) throw Error(Errc::DanglingEndpoint, l.endpoint_a, "link " + l.id);
    const auto b = s->node_lookup.find(l.endpoint_b);
    if (b == s->node_lookup.end()) throw Error(Errc::DanglingEndpoint, l.endpoint_b, "link " + l.id);
    if (a->second == b->second) throw Error(Errc::InvalidValue, l.id, "self-loop link");
    if (!(l.bandwidth_mbps > 0)) throw Error(Errc::NonPositiveCapacity, l.id, "bandwidth must be positive");
    if (!(l.propagation_delay_ms >= 0) || !std::isfinite(l.propagation_delay_ms)) {
      throw Error(Errc::InvalidValue, l.id, "propagation delay must be finite and >= 0");
    }
    const LinkIndex li = s->link_ids.size();
    s->link_lookup.emplace(l.id, li);
    s->link_ids.push_back(l.id);
    s->endpoint_a.push_back(a->second);
    s->endpoint_b.push_back(b->second);
    s->bandwidth_capacity.push_back(to_micro_units(l.bandwidth_mbps));
    s->adjacency[a->second].push_back({li, b->second});
    s->adjacency[b->second].push_back({li, a->second});
  }

  const auto ingress = s->node_lookup.find(spec.ingress_node);
  if (ingress == s->node_lookup.end()) throw Error(Errc::UnknownNode, spec.ingress_node, "ingress node");
  s->ingress = ingress->second;
  const auto egress = s->node_lookup.find(spec.egress_host);
  if (egress == s->node_lookup.end() || egress->second >= spec.hosts.size()) {
    throw Error(Errc::UnknownHost, spec.egress_host, "egress host");
  }
  s->egress = egress->second;

  check_connected(s->adjacency, s->node_ids);

  std::vector<NodeIndex> order(s->node_ids.size());
  std::iota(order.begin(), order.end(), NodeIndex{0});
  std::sort(order.begin(), order.end(),
            [&](NodeIndex x, NodeIndex y) { return s->node_ids[x] < s->node_ids[y]; });
  s->rank.resize(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) s->rank[order[r]] = r;

  for (NodeIndex h = 0; h < spec.hosts.size(); ++h) {
    if (h != s->ingress && h != s->egress) s->compute_hosts.push_back(h);
  }

  SubstrateNetwork net{std::move(s)};
  return net;
}

SubstrateNetwork::SubstrateNetwork(std::shared_ptr<const Structure> structure)
    : structure_(std::move(structure)),
      cpu_(structure_->cpu_capacity),
      memory_(structure_->memory_capacity),
      bandwidth_(structure_->bandwidth_capacity) {}

const NetworkSpec& SubstrateNetwork::spec() const { return structure_->spec; }
std::size_t SubstrateNetwork::node_count() const { return structure_->node_ids.size(); }
std::size_t SubstrateNetwork::host_count() const { return structure_->spec.hosts.size(); }
std::size_t SubstrateNetwork::link_count() const { return structure_->link_ids.size(); }

const std::string& SubstrateNetwork::node_id(NodeIndex node) const { return structure_->node_ids.at(node); }
const std::string& SubstrateNetwork::link_id(LinkIndex link) const { return structure_->link_ids.at(link); }

std::optional<NodeIndex> SubstrateNetwork::find_node(std::string_view id) const {
  const auto it = structure_->node_lookup.find(std::string{id});
  if (it == structure_->node_lookup.end()) return std::nullopt;
  return it->second;
}

NodeIndex SubstrateNetwork::node(std::string_view id) const {
  if (auto n = find_node(id)) return *n;
  throw Error(Errc::UnknownNode, std::string{id});
}

NodeIndex SubstrateNetwork::host(std::string_view id) const {
  const auto n = find_node(id);
  if (!n || !is_host(*n)) throw Error(Errc::UnknownHost, std::string{id});
  return *n;
}

LinkIndex SubstrateNetwork::link(std::string_view id) const {
  const auto it = structure_->link_lookup.find(std::string{id});
  if (it == structure_->link_lookup.end()) throw Error(Errc::UnknownLink, std::string{id});
  return it->second;
}

std::span<const SubstrateNetwork::Adjacent> SubstrateNetwork::adjacent(NodeIndex node) const {
  return structure_->adjacency.at(node);
}

NodeIndex SubstrateNetwork::link_endpoint_a(LinkIndex link) const { return structure_->endpoint_a.at(link); }
NodeIndex SubstrateNetwork::link_endpoint_b(LinkIndex link) const { return structure_->endpoint_b.at(link); }
double SubstrateNetwork::propagation_delay_ms(LinkIndex link) const {
  return structure_->spec.links.at(link).propagation_delay_ms;
}

NodeIndex SubstrateNetwork::ingress() const { return structure_->ingress; }
NodeIndex SubstrateNetwork::egress() const { return structure_->egress; }
std::span<const NodeIndex> SubstrateNetwork::compute_hosts() const { return structure_->compute_hosts; }
std::size_t SubstrateNetwork::id_rank(NodeIndex node) const { return structure_->rank.at(node); }

void SubstrateNetwork::check_host(NodeIndex host) const {
  if (host >= host_count()) throw Error(Errc::UnknownHost, "#" + std::to_string(host));
}

void SubstrateNetwork::check_link(LinkIndex link) const {
  if (link >= link_count()) throw Error(Errc::UnknownLink, "#" + std::to_string(link));
}

int SubstrateNetwork::cpu_count(NodeIndex host) const {
  check_host(host);
  return structure_->spec.hosts[host].cpus;
}
double SubstrateNetwork::cpu_capacity(NodeIndex host) const {
  check_host(host);
  return from_micro_units(structure_->cpu_capacity[host]);
}
double SubstrateNetwork::memory_capacity(NodeIndex host) const {
  check_host(host);
  return from_micro_units(structure_->memory_capacity[host]);
}
double SubstrateNetwork::bandwidth_capacity(LinkIndex link) const {
  check_link(link);
  return from_micro_units(structure_->bandwidth_capacity[link]);
}

double SubstrateNetwork::residual_cpu(NodeIndex host) const { return from_micro_units(residual_cpu_units(host)); }
double SubstrateNetwork::residual_memory(NodeIndex host) const {
  return from_micro_units(residual_memory_units(host));
}
double SubstrateNetwork::residual_bandwidth(LinkIndex link) const {
  return from_micro_units(residual_bandwidth_units(link));
}
std::int64_t SubstrateNetwork::residual_cpu_units(NodeIndex host) const {
  check_host(host);
  return cpu_[host];
}
std::int64_t SubstrateNetwork::residual_memory_units(NodeIndex host) const {
  check_host(host);
  return memory_[host];
}
std::int64_t SubstrateNetwork::residual_bandwidth_units(LinkIndex link) const {
  check_link(link);
  return bandwidth_[link];
}

namespace {

std::int64_t positive_units(double amount, const std::string& subject) {
  if (!(amount > 0) || !std::isfinite(amount)) {
    throw Error(Errc::InvalidValue, subject, "amount must be positive and finite");
  }
  return to_micro_units(amount);
}

void take(std::int64_t& residual, std::int64_t units, Errc shortage, const std::string& subject) {
  if (residual < units) {
    throw Error(shortage, subject,
                "residual " + std::to_string(from_micro_units(residual)) + " < demand " +
                    std::to_string(from_micro_units(units)));
  }
  residual -= units;
}

void give(std::int64_t& residual, std::int64_t capacity, std::int64_t units, const std::string& subject) {
  if (units > capacity - residual) throw Error(Errc::OverRelease, subject);
  residual += units;
}

}  // namespace

void SubstrateNetwork::allocate_cpu(NodeIndex host, double amount) {
  check_host(host);
  take(cpu_[host], positive_units(amount, node_id(host)), Errc::InsufficientCpu, node_id(host));
}
void SubstrateNetwork::release_cpu(NodeIndex host, double amount) {
  check_host(host);
  give(cpu_[host], structure_->cpu_capacity[host], positive_units(amount, node_id(host)), node_id(host));
}
void SubstrateNetwork::allocate_memory(NodeIndex host, double amount) {
  check_host(host);
  take(memory_[host], positive_units(amount, node_id(host)), Errc::InsufficientMemory, node_id(host));
}
void SubstrateNetwork::release_memory(NodeIndex host, double amount) {
  check_host(host);
  give(memory_[host], structure_->memory_capacity[host], positive_units(amount, node_id(host)), node_id(host));
}
void SubstrateNetwork::allocate_bandwidth(LinkIndex link, double amount) {
  check_link(link);
  take(bandwidth_[link], positive_units(amount, link_id(link)), Errc::InsufficientBandwidth, link_id(link));
}
void SubstrateNetwork::release_bandwidth(LinkIndex link, double amount) {
  check_link(link);
  give(bandwidth_[link], structure_->bandwidth_capacity[link], positive_units(amount, link_id(link)),
       link_id(link));
}

void SubstrateNetwork::allocate_cpu(std::string_view h, double amount) { allocate_cpu(host(h), amount); }
void SubstrateNetwork::release_cpu(std::string_view h, double amount) { release_cpu(host(h), amount); }
void SubstrateNetwork::allocate_memory(std::string_view h, double amount) { allocate_memory(host(h), amount); }
void SubstrateNetwork::release_memory(std::string_view h, double amount) { release_memory(host(h), amount); }
void SubstrateNetwork::allocate_bandwidth(std::string_view l, double amount) {
  allocate_bandwidth(link(l), amount);
}
void SubstrateNetwork::release_bandwidth(std::string_view l, double amount) {
  release_bandwidth(link(l), amount);
}

bool operator==(const SubstrateNetwork& a, const SubstrateNetwork& b) {
  return a.structure_ == b.structure_ && a.cpu_ == b.cpu_ && a.memory_ == b.memory_ &&
         a.bandwidth_ == b.bandwidth_;
}

}  // namespace rasesim
