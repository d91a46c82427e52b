#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rasesim {

struct VnfDescriptor {
  std::string name;
  double cpu_per_request = 0.0;       // CPU-seconds per request
  double base_service_time_ms = 0.0;  // at zero load
  double memory_mb = 0.0;
  double bandwidth_scale = 1.0;  // payload multiplier on exit

  friend bool operator==(const VnfDescriptor&, const VnfDescriptor&) = default;
};

/// Validates a single profile; throws InvalidProfile.
void validate_profile(const VnfDescriptor& vnf);

class Catalog {
 public:
  Catalog() = default;
  /// Throws DuplicateVnfType or InvalidProfile.
  explicit Catalog(std::vector<VnfDescriptor> vnfs);

  const VnfDescriptor* find(std::string_view name) const;
  const VnfDescriptor& at(std::string_view name) const;  // throws UnknownVnf
  std::span<const VnfDescriptor> entries() const { return vnfs_; }
  std::size_t size() const { return vnfs_.size(); }
  bool empty() const { return vnfs_.empty(); }

  friend bool operator==(const Catalog&, const Catalog&) = default;

 private:
  std::vector<VnfDescriptor> vnfs_;
};

/// Parses `{"vnfs": [{name, cpu_per_request, base_service_time_ms,
/// memory_mb, bandwidth_scale}]}`. Throws ParseError, DuplicateVnfType,
/// InvalidProfile.
Catalog load_catalog(std::string_view document);
Catalog load_catalog_file(const std::filesystem::path& path);

/// The shipped seven-VNF catalog (identical to scenarios/catalog.json).
Catalog default_catalog();

struct TrafficSegment {
  double start_s = 0.0;
  double end_s = 0.0;
  double rps = 0.0;

  friend bool operator==(const TrafficSegment&, const TrafficSegment&) = default;
};

/// Piecewise-constant request-rate schedule over contiguous segments.
class TrafficPattern {
 public:
  TrafficPattern() = default;
  /// Throws InvalidSfcr unless segments are contiguous, start < end, rps >= 0.
  explicit TrafficPattern(std::vector<TrafficSegment> segments);

  static TrafficPattern constant(double rps, double duration_s);

  /// Rate in effect at t (segments are half-open [start, end)); 0 outside.
  double rate_at(double t) const;
  double peak_rate() const;
  std::span<const TrafficSegment> segments() const { return segments_; }

  friend bool operator==(const TrafficPattern&, const TrafficPattern&) = default;

 private:
  std::vector<TrafficSegment> segments_;
};

struct SfcRequest {
  std::string id;
  std::vector<std::string> chain;
  double bandwidth_demand_mbps = 0.0;
  double request_size_bits = 0.0;
  TrafficPattern traffic;

  friend bool operator==(const SfcRequest&, const SfcRequest&) = default;
};

/// Throws InvalidSfcr or UnknownVnf.
void validate_sfcr(const SfcRequest& sfcr, const Catalog& catalog);

/// Parses `{"sfcrs": [{id, chain, bandwidth_mbps, request_size_bits,
/// traffic: [{start_s, end_s, rps}]}]}` and validates against the catalog.
std::vector<SfcRequest> load_sfcrs(std::string_view document, const Catalog& catalog);
std::vector<SfcRequest> load_sfcrs_file(const std::filesystem::path& path, const Catalog& catalog);
std::string dump_sfcrs(std::span<const SfcRequest> sfcrs);

/// |templates| x duplicates requests, template-major; copy i of template t
/// is named "<t.id>-<i>". The seed is accepted for provenance only.
std::vector<SfcRequest> generate_sfcrs(std::span<const SfcRequest> templates, std::size_t duplicates,
                                       std::uint64_t seed);

}  // namespace rasesim
