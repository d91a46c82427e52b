#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rasesim/catalog.hpp"
#include "rasesim/solver.hpp"
#include "rasesim/telemetry.hpp"
#include "rasesim/topology.hpp"

namespace rasesim {

/// SFC encapsulation carried in the request header: `<sfc_id>;<vnf1>,<vnf2>,...`
struct SfcHeader {
  std::string sfc_id;
  std::vector<std::string> chain;

  friend bool operator==(const SfcHeader&, const SfcHeader&) = default;
};

/// Throws MalformedHeader if the id is empty or contains ';' or ',', or any
/// chain element is empty or contains ','.
std::string encode_sfc_header(const SfcHeader& header);
/// Throws MalformedHeader (missing ';', empty id, empty chain element).
SfcHeader decode_sfc_header(std::string_view wire);

struct EngineConfig {
  double duration_s = 60.0;
  double sample_interval_s = 1.0;
  double utilization_cap = 0.99;
  double jitter_sigma = 0.05;
  double idle_spike_prob = 0.01;
  std::pair<double, double> idle_spike_range{0.05, 0.15};
  std::uint64_t seed = 0;

  /// Throws InvalidParams.
  void validate() const;
  std::size_t frame_count() const;

  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

struct VnfLoad {
  double rate_rps = 0.0;
  double cpu_per_request = 0.0;
};

struct Utilization {
  double value = 0.0;      // capped
  bool saturated = false;  // uncapped demand >= 1
};

/// min(cap, sum(rate * cpu_per_request) / cpus).
Utilization host_utilization(std::span<const VnfLoad> loads, int cpus, double utilization_cap);

/// True utilization of every host (indexed by NodeIndex) given each
/// request's current rate.
std::vector<Utilization> host_utilizations(const SubstrateNetwork& net, const EmbeddingScheme& scheme,
                                           std::span<const SfcRequest> sfcrs, const Catalog& catalog,
                                           std::span<const double> rates, double utilization_cap);

/// Noise-free round-trip latency of one accepted chain: forward link terms
/// (propagation + transmission of the payload as scaled by upstream VNFs),
/// processor-sharing service base / (1 - rho) per VNF, and the forward links
/// retraced in reverse carrying request_size. Throws NotAccepted.
double sfc_latency(const Embedding& embedding, const SfcRequest& sfcr, const SubstrateNetwork& net,
                   const Catalog& catalog, std::span<const Utilization> utilization);

/// Fluid-flow simulation sampled every cfg.sample_interval_s, starting at
/// t = 0. Deterministic for a given cfg.seed. Throws InconsistentScheme when
/// the scheme does not match the requests.
std::vector<TelemetryFrame> simulate(const SubstrateNetwork& net, const EmbeddingScheme& scheme,
                                     std::span<const SfcRequest> sfcrs, const Catalog& catalog,
                                     const EngineConfig& cfg);

/// Acceptance ratio of the scheme and mean simulated latency of its accepted
/// chains.
Fitness evaluate_scheme(const SubstrateNetwork& net, const EmbeddingScheme& scheme,
                        std::span<const SfcRequest> sfcrs, const Catalog& catalog, const EngineConfig& cfg);

}  // namespace rasesim
