#include "rasesim/engine.hpp"

#include <cmath>

#include "rasesim/error.hpp"
#include "rasesim/rng.hpp"

namespace rasesim {

std::string encode_sfc_header(const SfcHeader& header) {
  if (header.sfc_id.empty() || header.sfc_id.find_first_of(";,") != std::string::npos) {
    throw Error(Errc::MalformedHeader, header.sfc_id, "sfc id must be non-empty without ';' or ','");
  }
  if (header.chain.empty()) throw Error(Errc::MalformedHeader, header.sfc_id, "empty chain");
  std::string wire = header.sfc_id;
  wire += ';';
  for (std::size_t i = 0; i < header.chain.size(); ++i) {
    const auto& vnf = header.chain[i];
    if (vnf.empty() || vnf.find(',') != std::string::npos) {
      throw Error(Errc::MalformedHeader, header.sfc_id, "chain element " + std::to_string(i));
    }
    if (i > 0) wire += ',';
    wire += vnf;
  }
  return wire;
}

SfcHeader decode_sfc_header(std::string_view wire) {
  const auto semi = wire.find(';');
  if (semi == std::string_view::npos) throw Error(Errc::MalformedHeader, std::string{wire}, "missing ';'");
  SfcHeader header;
  header.sfc_id = std::string{wire.substr(0, semi)};
  if (header.sfc_id.empty() || header.sfc_id.find(',') != std::string::npos) {
    throw Error(Errc::MalformedHeader, std::string{wire}, "empty or invalid sfc id");
  }
  std::string_view rest = wire.substr(semi + 1);
  for (;;) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    if (item.empty() || item.find(';') != std::string_view::npos) {
      throw Error(Errc::MalformedHeader, std::string{wire}, "empty chain element");
    }
    header.chain.emplace_back(item);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return header;
}

void EngineConfig::validate() const {
  if (!(sample_interval_s > 0) || !(sample_interval_s <= duration_s) || !std::isfinite(duration_s)) {
    throw Error(Errc::InvalidParams, "sample_interval_s", "need 0 < sample_interval <= duration");
  }
  if (!(utilization_cap > 0 && utilization_cap < 1)) {
    throw Error(Errc::InvalidParams, "utilization_cap", "must lie in (0, 1)");
  }
  // Noise is truncated at 3 sigma; below 1/3 the jittered latency stays positive.
  if (!(jitter_sigma >= 0 && jitter_sigma < 1.0 / 3.0)) {
    throw Error(Errc::InvalidParams, "jitter_sigma", "must lie in [0, 1/3)");
  }
  if (!(idle_spike_prob >= 0 && idle_spike_prob <= 1)) {
    throw Error(Errc::InvalidParams, "idle_spike_prob", "must lie in [0, 1]");
  }
  const auto [lo, hi] = idle_spike_range;
  if (!(lo >= 0 && lo <= hi && hi <= 1)) {
    throw Error(Errc::InvalidParams, "idle_spike_range", "need 0 <= lo <= hi <= 1");
  }
}

std::size_t EngineConfig::frame_count() const {
  return static_cast<std::size_t>(std::floor(duration_s / sample_interval_s + 1e-9));
}

Utilization host_utilization(std::span<const VnfLoad> loads, int cpus, double utilization_cap) {
  double demand = 0.0;
  for (const auto& l : loads) demand += l.rate_rps * l.cpu_per_request;
  const double rho = cpus > 0 ? demand / cpus : 0.0;
  return {std::min(rho, utilization_cap), rho >= 1.0};
}

namespace {

void check_consistent(const SubstrateNetwork& net, const EmbeddingScheme& scheme,
                      std::span<const SfcRequest> sfcrs) {
  if (scheme.entries.size() != sfcrs.size()) {
    throw Error(Errc::InconsistentScheme, "scheme",
                std::to_string(scheme.entries.size()) + " entries for " + std::to_string(sfcrs.size()) +
                    " requests");
  }
  for (std::size_t i = 0; i < sfcrs.size(); ++i) {
    const auto& e = scheme.entries[i];
    if (e.sfcr_id != sfcrs[i].id) throw Error(Errc::InconsistentScheme, e.sfcr_id, "expected " + sfcrs[i].id);
    if (!e.accepted()) continue;
    const auto& p = e.placement();
    if (p.hosts.size() != sfcrs[i].chain.size() || p.segments.size() != p.hosts.size() + 1) {
      throw Error(Errc::InconsistentScheme, e.sfcr_id, "placement does not match chain length");
    }
    for (NodeIndex h : p.hosts) {
      if (h >= net.host_count()) throw Error(Errc::InconsistentScheme, e.sfcr_id, "placement on a non-host");
    }
    for (const auto& seg : p.segments) {
      for (LinkIndex l : seg.links) {
        if (l >= net.link_count()) throw Error(Errc::InconsistentScheme, e.sfcr_id, "unknown link");
      }
    }
  }
}

double link_term_ms(const SubstrateNetwork& net, LinkIndex link, double size_bits) {
  return net.propagation_delay_ms(link) + size_bits / (net.bandwidth_capacity(link) * 1e3);
}

// A link crossing of one request at a given payload size (bits per request).
struct Traversal {
  LinkIndex link;
  double size_bits;
};

std::vector<Traversal> traversals(const Placement& p, const SfcRequest& sfcr, const Catalog& catalog) {
  std::vector<Traversal> out;
  double size = sfcr.request_size_bits;
  for (std::size_t seg = 0; seg < p.segments.size(); ++seg) {
    if (seg > 0) size *= catalog.at(sfcr.chain[seg - 1]).bandwidth_scale;
    for (LinkIndex l : p.segments[seg].links) out.push_back({l, size});
  }
  for (std::size_t seg = p.segments.size(); seg-- > 0;) {
    const auto& links = p.segments[seg].links;
    for (auto it = links.rbegin(); it != links.rend(); ++it) out.push_back({*it, sfcr.request_size_bits});
  }
  return out;
}

}  // namespace

std::vector<Utilization> host_utilizations(const SubstrateNetwork& net, const EmbeddingScheme& scheme,
                                           std::span<const SfcRequest> sfcrs, const Catalog& catalog,
                                           std::span<const double> rates, double utilization_cap) {
  std::vector<std::vector<VnfLoad>> loads(net.host_count());
  for (std::size_t i = 0; i < scheme.entries.size(); ++i) {
    const auto& e = scheme.entries[i];
    if (!e.accepted()) continue;
    const auto& hosts = e.placement().hosts;
    for (std::size_t pos = 0; pos < hosts.size(); ++pos) {
      loads[hosts[pos]].push_back({rates[i], catalog.at(sfcrs[i].chain[pos]).cpu_per_request});
    }
  }
  std::vector<Utilization> util(net.host_count());
  for (NodeIndex h = 0; h < net.host_count(); ++h) {
    util[h] = host_utilization(loads[h], net.cpu_count(h), utilization_cap);
  }
  return util;
}

double sfc_latency(const Embedding& embedding, const SfcRequest& sfcr, const SubstrateNetwork& net,
                   const Catalog& catalog, std::span<const Utilization> utilization) {
  if (!embedding.accepted()) throw Error(Errc::NotAccepted, embedding.sfcr_id);
  const auto& p = embedding.placement();
  double total = 0.0;
  for (const auto& t : traversals(p, sfcr, catalog)) total += link_term_ms(net, t.link, t.size_bits);
  for (std::size_t pos = 0; pos < p.hosts.size(); ++pos) {
    const double rho = utilization[p.hosts[pos]].value;
    total += catalog.at(sfcr.chain[pos]).base_service_time_ms / (1.0 - rho);
  }
  return total;
}

std::vector<TelemetryFrame> simulate(const SubstrateNetwork& net, const EmbeddingScheme& scheme,
                                     std::span<const SfcRequest> sfcrs, const Catalog& catalog,
                                     const EngineConfig& cfg) {
  cfg.validate();
  check_consistent(net, scheme, sfcrs);

  std::vector<std::vector<Traversal>> crossings(sfcrs.size());
  for (std::size_t i = 0; i < sfcrs.size(); ++i) {
    if (scheme.entries[i].accepted()) crossings[i] = traversals(scheme.entries[i].placement(), sfcrs[i], catalog);
  }

  Rng rng{cfg.seed};
  const auto [spike_lo, spike_hi] = cfg.idle_spike_range;
  const std::size_t n = cfg.frame_count();
  std::vector<TelemetryFrame> frames;
  frames.reserve(n);
  std::vector<double> rates(sfcrs.size());
  std::vector<double> link_use(net.link_count());

  for (std::size_t k = 0; k < n; ++k) {
    TelemetryFrame frame;
    frame.timestamp_s = static_cast<double>(k) * cfg.sample_interval_s;
    for (std::size_t i = 0; i < sfcrs.size(); ++i) rates[i] = sfcrs[i].traffic.rate_at(frame.timestamp_s);

    const auto util = host_utilizations(net, scheme, sfcrs, catalog, rates, cfg.utilization_cap);
    for (NodeIndex h = 0; h < net.host_count(); ++h) {
      double value = util[h].value;
      if (value == 0.0 && rng.bernoulli(cfg.idle_spike_prob)) value = rng.uniform(spike_lo, spike_hi);
      frame.host_cpu.emplace(net.node_id(h), value);
    }

    std::fill(link_use.begin(), link_use.end(), 0.0);
    for (std::size_t i = 0; i < sfcrs.size(); ++i) {
      for (const auto& t : crossings[i]) link_use[t.link] += rates[i] * t.size_bits / 1e6;
    }
    for (LinkIndex l = 0; l < net.link_count(); ++l) frame.link_bw_mbps.emplace(net.link_id(l), link_use[l]);

    for (std::size_t i = 0; i < sfcrs.size(); ++i) {
      const auto& e = scheme.entries[i];
      if (!e.accepted()) continue;
      double latency = sfc_latency(e, sfcrs[i], net, catalog, util);
      if (cfg.jitter_sigma > 0) {
        double z = rng.normal();
        while (std::abs(z) > 3.0) z = rng.normal();
        latency *= 1.0 + cfg.jitter_sigma * z;
      }
      frame.sfc_latency_ms.emplace(e.sfcr_id, latency);
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

Fitness evaluate_scheme(const SubstrateNetwork& net, const EmbeddingScheme& scheme,
                        std::span<const SfcRequest> sfcrs, const Catalog& catalog, const EngineConfig& cfg) {
  Fitness f;
  f.acceptance_ratio = acceptance_ratio(scheme);
  if (scheme.accepted_count() == 0) return f;
  const auto frames = simulate(net, scheme, sfcrs, catalog, cfg);
  std::vector<std::string> accepted;
  for (const auto& e : scheme.entries) {
    if (e.accepted()) accepted.push_back(e.sfcr_id);
  }
  f.mean_latency_ms = mean_latency(frames, accepted);
  return f;
}

}  // namespace rasesim
