#include "rasesim/json_io.hpp"

namespace rasesim::json_io {

Json parse(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ParseError, std::string{what}, e.what());
  }
}

ObjectReader::ObjectReader(const Json& object, std::string path) : object_(object), path_(std::move(path)) {
  if (!object_.is_object()) fail(path_, "expected object");
}

bool ObjectReader::has(std::string_view key) const { return object_.contains(key); }

const Json& ObjectReader::raw(std::string_view key) {
  if (!has(key)) fail(child(key), "missing required field");
  consumed_.emplace(key);
  return object_.at(std::string{key});
}

void ObjectReader::finish() const {
  for (const auto& [key, _] : object_.items()) {
    if (!consumed_.contains(key)) fail(child(key), "unknown key");
  }
}

void ObjectReader::fail(const std::string& path, const std::string& detail) {
  throw Error(Errc::ParseError, path, detail);
}

namespace {

const Json& array_at(ObjectReader& r, std::string_view key) {
  const Json& a = r.raw(key);
  if (!a.is_array()) ObjectReader::fail(r.child(key), "expected array");
  return a;
}

std::string item_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

}  // namespace

NetworkSpec network_from_json(const Json& j, const std::string& path) {
  ObjectReader r{j, path};
  NetworkSpec spec;
  const Json& hosts = array_at(r, "hosts");
  for (std::size_t i = 0; i < hosts.size(); ++i) {
    ObjectReader h{hosts[i], item_path(r.child("hosts"), i)};
    HostSpec host;
    host.id = h.required<std::string>("id");
    host.cpus = h.required<int>("cpus");
    host.memory_mb = h.required<double>("memory_mb");
    h.finish();
    spec.hosts.push_back(std::move(host));
  }
  spec.switches = r.optional<std::vector<std::string>>("switches", {});
  const Json& links = array_at(r, "links");
  for (std::size_t i = 0; i < links.size(); ++i) {
    ObjectReader l{links[i], item_path(r.child("links"), i)};
    LinkSpec link;
    link.id = l.optional<std::string>("id", "");
    link.endpoint_a = l.required<std::string>("a");
    link.endpoint_b = l.required<std::string>("b");
    link.bandwidth_mbps = l.required<double>("bandwidth_mbps");
    link.propagation_delay_ms = l.optional<double>("delay_ms", 0.0);
    l.finish();
    spec.links.push_back(std::move(link));
  }
  spec.ingress_node = r.required<std::string>("ingress_node");
  spec.egress_host = r.required<std::string>("egress_host");
  r.finish();
  return spec;
}

Json to_json(const NetworkSpec& spec) {
  Json hosts = Json::array();
  for (const auto& h : spec.hosts) hosts.push_back({{"id", h.id}, {"cpus", h.cpus}, {"memory_mb", h.memory_mb}});
  Json links = Json::array();
  for (const auto& l : spec.links) {
    Json link = {{"a", l.endpoint_a},
                 {"b", l.endpoint_b},
                 {"bandwidth_mbps", l.bandwidth_mbps},
                 {"delay_ms", l.propagation_delay_ms}};
    if (!l.id.empty()) link["id"] = l.id;
    links.push_back(std::move(link));
  }
  return {{"hosts", std::move(hosts)},
          {"switches", spec.switches},
          {"links", std::move(links)},
          {"ingress_node", spec.ingress_node},
          {"egress_host", spec.egress_host}};
}

std::vector<VnfDescriptor> vnfs_from_json(const Json& j, const std::string& path) {
  ObjectReader r{j, path};
  r.optional<int>("version", 1);
  std::vector<VnfDescriptor> out;
  if (r.has("vnfs")) {
    const Json& vnfs = array_at(r, "vnfs");
    for (std::size_t i = 0; i < vnfs.size(); ++i) {
      ObjectReader v{vnfs[i], item_path(r.child("vnfs"), i)};
      VnfDescriptor d;
      d.name = v.required<std::string>("name");
      d.cpu_per_request = v.required<double>("cpu_per_request");
      d.base_service_time_ms = v.required<double>("base_service_time_ms");
      d.memory_mb = v.required<double>("memory_mb");
      d.bandwidth_scale = v.optional<double>("bandwidth_scale", 1.0);
      v.finish();
      out.push_back(std::move(d));
    }
  }
  r.finish();
  return out;
}

Json to_json(const Catalog& catalog) {
  Json vnfs = Json::array();
  for (const auto& v : catalog.entries()) {
    vnfs.push_back({{"name", v.name},
                    {"cpu_per_request", v.cpu_per_request},
                    {"base_service_time_ms", v.base_service_time_ms},
                    {"memory_mb", v.memory_mb},
                    {"bandwidth_scale", v.bandwidth_scale}});
  }
  return {{"vnfs", std::move(vnfs)}};
}

TrafficPattern traffic_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) ObjectReader::fail(path, "expected array");
  std::vector<TrafficSegment> segments;
  for (std::size_t i = 0; i < j.size(); ++i) {
    ObjectReader s{j[i], item_path(path, i)};
    TrafficSegment seg;
    seg.start_s = s.required<double>("start_s");
    seg.end_s = s.required<double>("end_s");
    seg.rps = s.required<double>("rps");
    s.finish();
    segments.push_back(seg);
  }
  return TrafficPattern{std::move(segments)};
}

Json to_json(const TrafficPattern& traffic) {
  Json out = Json::array();
  for (const auto& s : traffic.segments()) out.push_back({{"start_s", s.start_s}, {"end_s", s.end_s}, {"rps", s.rps}});
  return out;
}

SfcRequest sfcr_from_json(const Json& j, const std::string& path) {
  ObjectReader r{j, path};
  SfcRequest s;
  s.id = r.required<std::string>("id");
  s.chain = r.required<std::vector<std::string>>("chain");
  s.bandwidth_demand_mbps = r.required<double>("bandwidth_mbps");
  s.request_size_bits = r.required<double>("request_size_bits");
  s.traffic = traffic_from_json(r.raw("traffic"), r.child("traffic"));
  r.finish();
  return s;
}

Json to_json(const SfcRequest& sfcr) {
  return {{"id", sfcr.id},
          {"chain", sfcr.chain},
          {"bandwidth_mbps", sfcr.bandwidth_demand_mbps},
          {"request_size_bits", sfcr.request_size_bits},
          {"traffic", to_json(sfcr.traffic)}};
}

std::vector<SfcRequest> sfcrs_from_json(const Json& j, const std::string& path) {
  const Json* items = &j;
  std::string items_path = path;
  if (j.is_object()) {
    ObjectReader r{j, path};
    r.optional<int>("version", 1);
    items = &array_at(r, "sfcrs");
    items_path = r.child("sfcrs");
    r.finish();
  }
  if (!items->is_array()) ObjectReader::fail(items_path, "expected array");
  std::vector<SfcRequest> out;
  for (std::size_t i = 0; i < items->size(); ++i) out.push_back(sfcr_from_json((*items)[i], item_path(items_path, i)));
  return out;
}

EngineConfig engine_from_json(const Json& j, EngineConfig defaults, const std::string& path) {
  ObjectReader r{j, path};
  EngineConfig c = defaults;
  c.duration_s = r.optional<double>("duration_s", c.duration_s);
  c.sample_interval_s = r.optional<double>("sample_interval_s", c.sample_interval_s);
  c.utilization_cap = r.optional<double>("utilization_cap", c.utilization_cap);
  c.jitter_sigma = r.optional<double>("jitter_sigma", c.jitter_sigma);
  c.idle_spike_prob = r.optional<double>("idle_spike_prob", c.idle_spike_prob);
  if (r.has("idle_spike_range")) {
    const Json& range = r.raw("idle_spike_range");
    if (!range.is_array() || range.size() != 2) ObjectReader::fail(r.child("idle_spike_range"), "expected [lo, hi]");
    c.idle_spike_range = {ObjectReader::convert<double>(range[0], r.child("idle_spike_range") + "[0]"),
                          ObjectReader::convert<double>(range[1], r.child("idle_spike_range") + "[1]")};
  }
  c.seed = r.optional<std::uint64_t>("seed", c.seed);
  r.finish();
  return c;
}

Json to_json(const EngineConfig& cfg) {
  return {{"duration_s", cfg.duration_s},
          {"sample_interval_s", cfg.sample_interval_s},
          {"utilization_cap", cfg.utilization_cap},
          {"jitter_sigma", cfg.jitter_sigma},
          {"idle_spike_prob", cfg.idle_spike_prob},
          {"idle_spike_range", {cfg.idle_spike_range.first, cfg.idle_spike_range.second}},
          {"seed", cfg.seed}};
}

GaParams ga_from_json(const Json& j, const std::string& path) {
  ObjectReader r{j, path};
  GaParams p;
  p.population = r.optional<std::size_t>("population", p.population);
  p.generations = r.optional<std::size_t>("generations", p.generations);
  p.tournament_k = r.optional<std::size_t>("tournament_k", p.tournament_k);
  p.crossover_rate = r.optional<double>("crossover_rate", p.crossover_rate);
  if (r.has("mutation_rate") && !r.raw("mutation_rate").is_null()) {
    p.mutation_rate = ObjectReader::convert<double>(r.raw("mutation_rate"), r.child("mutation_rate"));
  }
  p.elitism = r.optional<std::size_t>("elitism", p.elitism);
  r.finish();
  return p;
}

Json to_json(const GaParams& p) {
  return {{"population", p.population},
          {"generations", p.generations},
          {"tournament_k", p.tournament_k},
          {"crossover_rate", p.crossover_rate},
          {"mutation_rate", optional_number(p.mutation_rate)},
          {"elitism", p.elitism}};
}

Json optional_number(const std::optional<double>& value) { return value ? Json(*value) : Json(nullptr); }

std::optional<double> optional_number_from_json(const Json& j, const std::string& path) {
  if (j.is_null()) return std::nullopt;
  return ObjectReader::convert<double>(j, path);
}

Json to_json(const Fitness& f) {
  return {{"acceptance_ratio", f.acceptance_ratio}, {"mean_latency_ms", optional_number(f.mean_latency_ms)}};
}

Fitness fitness_from_json(const Json& j, const std::string& path) {
  ObjectReader r{j, path};
  Fitness f;
  f.acceptance_ratio = r.required<double>("acceptance_ratio");
  f.mean_latency_ms = optional_number_from_json(r.raw("mean_latency_ms"), r.child("mean_latency_ms"));
  r.finish();
  return f;
}

namespace {

std::map<std::string, double> number_map(const Json& j, const std::string& path) {
  if (!j.is_object()) ObjectReader::fail(path, "expected object");
  std::map<std::string, double> out;
  for (const auto& [k, v] : j.items()) out.emplace(k, ObjectReader::convert<double>(v, path + "." + k));
  return out;
}

}  // namespace

Json to_json(const TelemetryFrame& frame) {
  return {{"timestamp_s", frame.timestamp_s},
          {"host_cpu", frame.host_cpu},
          {"link_bw_mbps", frame.link_bw_mbps},
          {"sfc_latency_ms", frame.sfc_latency_ms}};
}

TelemetryFrame frame_from_json(const Json& j, const std::string& path) {
  ObjectReader r{j, path};
  TelemetryFrame f;
  f.timestamp_s = r.required<double>("timestamp_s");
  f.host_cpu = number_map(r.raw("host_cpu"), r.child("host_cpu"));
  f.link_bw_mbps = number_map(r.raw("link_bw_mbps"), r.child("link_bw_mbps"));
  f.sfc_latency_ms = number_map(r.raw("sfc_latency_ms"), r.child("sfc_latency_ms"));
  r.finish();
  return f;
}

}  // namespace rasesim::json_io
