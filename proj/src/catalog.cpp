#include "rasesim/catalog.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "rasesim/error.hpp"
#include "rasesim/json_io.hpp"

namespace rasesim {

void validate_profile(const VnfDescriptor& vnf) {
  auto bad = [&](const char* what) { throw Error(Errc::InvalidProfile, vnf.name, what); };
  if (vnf.name.empty()) bad("empty name");
  if (vnf.name.find_first_of(";,") != std::string::npos) bad("name must not contain ';' or ','");
  if (!(vnf.cpu_per_request >= 0) || !std::isfinite(vnf.cpu_per_request)) bad("cpu_per_request must be >= 0");
  if (!(vnf.base_service_time_ms > 0) || !std::isfinite(vnf.base_service_time_ms)) {
    bad("base_service_time_ms must be > 0");
  }
  if (!(vnf.memory_mb >= 0) || !std::isfinite(vnf.memory_mb)) bad("memory_mb must be >= 0");
  if (!(vnf.bandwidth_scale > 0) || !std::isfinite(vnf.bandwidth_scale)) bad("bandwidth_scale must be > 0");
}

Catalog::Catalog(std::vector<VnfDescriptor> vnfs) : vnfs_(std::move(vnfs)) {
  std::unordered_set<std::string> names;
  for (const auto& v : vnfs_) {
    validate_profile(v);
    if (!names.insert(v.name).second) throw Error(Errc::DuplicateVnfType, v.name);
  }
}

const VnfDescriptor* Catalog::find(std::string_view name) const {
  for (const auto& v : vnfs_) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

const VnfDescriptor& Catalog::at(std::string_view name) const {
  if (const auto* v = find(name)) return *v;
  throw Error(Errc::UnknownVnf, std::string{name});
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in{path, std::ios::binary};
  if (!in) throw Error(Errc::IoError, path.string(), "cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

Catalog load_catalog(std::string_view document) {
  // An empty document is an empty catalog.
  if (document.find_first_not_of(" \t\r\n") == std::string_view::npos) return Catalog{};
  return Catalog{json_io::vnfs_from_json(json_io::parse(document, "catalog"))};
}

Catalog load_catalog_file(const std::filesystem::path& path) { return load_catalog(read_file(path)); }

Catalog default_catalog() {
  // Profiles are dyadic fractions so that demands at power-of-two rates are
  // exact.
  return Catalog{{
      {"firewall", 0.03125, 2.0, 128.0, 1.0},
      {"nat", 0.015625, 1.0, 64.0, 1.0},
      {"ids", 0.0625, 6.0, 256.0, 1.0},
      {"load-balancer", 0.046875, 1.5, 128.0, 1.0},
      {"cache", 0.078125, 4.0, 256.0, 1.0},
      {"compressor", 0.09375, 8.0, 192.0, 1.0},
      {"rate-limiter", 0.0234375, 1.25, 64.0, 1.0},
  }};
}

TrafficPattern::TrafficPattern(std::vector<TrafficSegment> segments) : segments_(std::move(segments)) {
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    const std::string where = "traffic[" + std::to_string(i) + "]";
    if (!(s.start_s < s.end_s) || !std::isfinite(s.start_s) || !std::isfinite(s.end_s)) {
      throw Error(Errc::InvalidSfcr, where, "need start < end");
    }
    if (!(s.rps >= 0) || !std::isfinite(s.rps)) throw Error(Errc::InvalidSfcr, where, "rps must be >= 0");
    if (i > 0 && s.start_s != segments_[i - 1].end_s) {
      throw Error(Errc::InvalidSfcr, where, "segments must be contiguous");
    }
  }
}

TrafficPattern TrafficPattern::constant(double rps, double duration_s) {
  return TrafficPattern{{{0.0, duration_s, rps}}};
}

double TrafficPattern::rate_at(double t) const {
  for (const auto& s : segments_) {
    if (t >= s.start_s && t < s.end_s) return s.rps;
  }
  return 0.0;
}

double TrafficPattern::peak_rate() const {
  double peak = 0.0;
  for (const auto& s : segments_) peak = std::max(peak, s.rps);
  return peak;
}

void validate_sfcr(const SfcRequest& sfcr, const Catalog& catalog) {
  if (sfcr.id.empty() || sfcr.id.find_first_of(";,") != std::string::npos) {
    throw Error(Errc::InvalidSfcr, sfcr.id, "id must be non-empty without ';' or ','");
  }
  if (sfcr.chain.empty()) throw Error(Errc::InvalidSfcr, sfcr.id, "empty chain");
  for (const auto& vnf : sfcr.chain) {
    if (!catalog.find(vnf)) throw Error(Errc::UnknownVnf, vnf, "in chain of " + sfcr.id);
  }
  if (!(sfcr.bandwidth_demand_mbps > 0) || !std::isfinite(sfcr.bandwidth_demand_mbps)) {
    throw Error(Errc::InvalidSfcr, sfcr.id, "bandwidth demand must be > 0");
  }
  if (!(sfcr.request_size_bits >= 0) || !std::isfinite(sfcr.request_size_bits)) {
    throw Error(Errc::InvalidSfcr, sfcr.id, "request size must be >= 0");
  }
}

std::vector<SfcRequest> load_sfcrs(std::string_view document, const Catalog& catalog) {
  auto sfcrs = json_io::sfcrs_from_json(json_io::parse(document, "sfcrs"));
  std::unordered_set<std::string> ids;
  for (const auto& s : sfcrs) {
    validate_sfcr(s, catalog);
    if (!ids.insert(s.id).second) throw Error(Errc::InvalidSfcr, s.id, "duplicate id");
  }
  return sfcrs;
}

std::vector<SfcRequest> load_sfcrs_file(const std::filesystem::path& path, const Catalog& catalog) {
  return load_sfcrs(read_file(path), catalog);
}

std::string dump_sfcrs(std::span<const SfcRequest> sfcrs) {
  json_io::Json items = json_io::Json::array();
  for (const auto& s : sfcrs) items.push_back(json_io::to_json(s));
  return json_io::Json{{"sfcrs", std::move(items)}}.dump(2) + "\n";
}

std::vector<SfcRequest> generate_sfcrs(std::span<const SfcRequest> templates, std::size_t duplicates,
                                       std::uint64_t /*seed*/) {
  if (templates.empty()) throw Error(Errc::EmptyInput, "templates");
  std::vector<SfcRequest> out;
  out.reserve(templates.size() * duplicates);
  for (const auto& t : templates) {
    for (std::size_t i = 0; i < duplicates; ++i) {
      SfcRequest copy = t;
      copy.id = t.id + "-" + std::to_string(i);
      out.push_back(std::move(copy));
    }
  }
  return out;
}

}  // namespace rasesim
