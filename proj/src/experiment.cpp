#include "rasesim/experiment.hpp"

#include <charconv>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <system_error>

#include "rasesim/error.hpp"
#include "rasesim/json_io.hpp"
#include "rasesim/rng.hpp"

namespace rasesim {

namespace fs = std::filesystem;
using json_io::Json;
using json_io::ObjectReader;

namespace {

constexpr std::uint64_t kEngineStream = 0xE2617E;
constexpr std::uint64_t kSolverStream = 0x501BE2;
constexpr int kReportVersion = 1;

std::string read_text(const fs::path& path) {
  std::ifstream in{path, std::ios::binary};
  if (!in) throw Error(Errc::ConfigError, path.string(), "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// A section may be inline JSON or a string naming a file relative to the
// config's directory.
Json section_document(const Json& value, const fs::path& base_dir, std::string_view what) {
  if (!value.is_string()) return value;
  const fs::path ref = base_dir / value.get<std::string>();
  if (!fs::exists(ref)) throw Error(Errc::ConfigError, ref.string(), std::string{what} + " file does not exist");
  return json_io::parse(read_text(ref), ref.string());
}

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : std::string{}; }

}  // namespace

StageError::StageError(std::string stage, const std::string& message)
    : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}

std::string_view to_string(SolverKind kind) {
  return kind == SolverKind::Ga ? "ga" : "simple-dijkstra";
}

ReportFormats ReportFormats::parse(std::string_view text) {
  if (text == "json") return {true, false};
  if (text == "csv") return {false, true};
  if (text == "both") return {true, true};
  throw Error(Errc::ConfigError, std::string{text}, "format must be csv, json or both");
}

std::string ExperimentConfig::digest() const {
  const Json canonical = {
      {"network", json_io::to_json(network)},
      {"catalog", json_io::to_json(catalog)},
      {"sfcrs", [&] {
         Json a = Json::array();
         for (const auto& t : templates) a.push_back(json_io::to_json(t));
         return a;
       }()},
      {"duplicates", duplicates},
      {"solver", {{"kind", to_string(solver)}, {"ga", json_io::to_json(ga)}}},
      {"engine", json_io::to_json(engine)},
      {"seed", seed},
  };
  return hex64(fnv1a(canonical.dump()));
}

namespace {

ExperimentConfig parse_config_unchecked(std::string_view document, const fs::path& base_dir,
                                        const ConfigOverrides& overrides) {
  const Json root = json_io::parse(document, "config");
  ObjectReader r{root, "config"};
  ExperimentConfig cfg;

  cfg.seed = r.optional<std::uint64_t>("seed", 0);
  if (overrides.seed) cfg.seed = *overrides.seed;

  cfg.network = json_io::network_from_json(section_document(r.raw("network"), base_dir, "network"));
  SubstrateNetwork::build(cfg.network);

  if (r.has("catalog")) {
    cfg.catalog = Catalog{json_io::vnfs_from_json(section_document(r.raw("catalog"), base_dir, "catalog"))};
  } else {
    cfg.catalog = default_catalog();
  }

  cfg.templates = json_io::sfcrs_from_json(section_document(r.raw("sfcrs"), base_dir, "sfcrs"));
  for (const auto& t : cfg.templates) validate_sfcr(t, cfg.catalog);
  if (cfg.templates.empty()) throw Error(Errc::ConfigError, "sfcrs", "at least one template is required");
  for (std::size_t i = 0; i < cfg.templates.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (cfg.templates[i].id == cfg.templates[j].id) throw Error(Errc::InvalidSfcr, cfg.templates[i].id, "duplicate id");
    }
  }

  cfg.duplicates = r.optional<std::size_t>("duplicates", 1);

  if (r.has("solver")) {
    ObjectReader s{r.raw("solver"), "config.solver"};
    const auto kind = s.optional<std::string>("kind", "simple-dijkstra");
    if (kind == "simple-dijkstra") {
      cfg.solver = SolverKind::SimpleDijkstra;
    } else if (kind == "ga") {
      cfg.solver = SolverKind::Ga;
    } else {
      throw Error(Errc::ConfigError, kind, "solver.kind must be simple-dijkstra or ga");
    }
    if (s.has("ga")) cfg.ga = json_io::ga_from_json(s.raw("ga"), "config.solver.ga");
    s.finish();
  }
  cfg.ga.validate();

  const Json engine_json = r.has("engine") ? r.raw("engine") : Json::object();
  cfg.engine = json_io::engine_from_json(engine_json, EngineConfig{}, "config.engine");
  if (overrides.seed || !engine_json.contains("seed")) cfg.engine.seed = stream_seed(cfg.seed, {kEngineStream});
  cfg.engine.validate();

  if (r.has("output")) {
    ObjectReader o{r.raw("output"), "config.output"};
    cfg.output.directory = o.optional<std::string>("directory", "results");
    if (o.has("formats")) {
      const Json& f = o.raw("formats");
      if (f.is_string()) {
        cfg.output.formats = ReportFormats::parse(f.get<std::string>());
      } else {
        ReportFormats formats{false, false};
        for (const auto& name : ObjectReader::convert<std::vector<std::string>>(f, o.child("formats"))) {
          const auto one = ReportFormats::parse(name);
          formats.json = formats.json || one.json;
          formats.csv = formats.csv || one.csv;
        }
        cfg.output.formats = formats;
      }
    }
    cfg.output.bin_width_ms = o.optional<double>("bin_width_ms", cfg.output.bin_width_ms);
    o.finish();
  }
  if (overrides.output_dir) {
    cfg.output.directory = *overrides.output_dir;
    cfg.output.pinned = true;
  }
  if (overrides.formats) cfg.output.formats = *overrides.formats;
  if (overrides.bin_width_ms) cfg.output.bin_width_ms = *overrides.bin_width_ms;
  if (!(cfg.output.bin_width_ms > 0)) throw Error(Errc::ConfigError, "bin_width_ms", "must be positive");
  if (!cfg.output.formats.json && !cfg.output.formats.csv) throw Error(Errc::ConfigError, "formats", "empty");
  if (overrides.parallelism) cfg.parallelism = std::max<std::size_t>(1, *overrides.parallelism);

  r.finish();
  return cfg;
}

}  // namespace

ExperimentConfig parse_config(std::string_view document, const fs::path& base_dir,
                              const ConfigOverrides& overrides) {
  try {
    return parse_config_unchecked(document, base_dir, overrides);
  } catch (const Error& e) {
    throw StageError("config", e.what());
  }
}

ExperimentConfig load_config(const fs::path& path, const ConfigOverrides& overrides) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const Error& e) {
    throw StageError("config", e.what());
  }
  return parse_config(text, path.parent_path(), overrides);
}

Evaluator engine_evaluator(std::span<const SfcRequest> sfcrs, const Catalog& catalog, EngineConfig engine) {
  return [sfcrs, &catalog, engine](const EvaluationContext& ctx) {
    EngineConfig cfg = engine;
    cfg.seed = ctx.seed;
    return evaluate_scheme(ctx.network, ctx.scheme, sfcrs, catalog, cfg);
  };
}

std::vector<std::string> ExperimentReport::accepted_ids() const {
  std::vector<std::string> ids;
  for (const auto& o : outcomes) {
    if (o.accepted) ids.push_back(o.sfcr_id);
  }
  return ids;
}

bool operator==(const ExperimentReport& a, const ExperimentReport& b) {
  return a.config_digest == b.config_digest && a.seed == b.seed && a.solver == b.solver &&
         a.outcomes == b.outcomes && a.acceptance_ratio == b.acceptance_ratio &&
         a.mean_latency_ms == b.mean_latency_ms && a.frames == b.frames && a.trace == b.trace;
}

std::vector<SfcRequest> materialize_sfcrs(const ExperimentConfig& cfg) {
  return generate_sfcrs(cfg.templates, cfg.duplicates, cfg.seed);
}

namespace {

// Segments must join ingress -> placed hosts -> egress, each segment a
// connected walk; placements must be compute hosts.
void validate_scheme(const SubstrateNetwork& net, const EmbeddingScheme& scheme) {
  const auto compute = net.compute_hosts();
  for (const auto& e : scheme.entries) {
    if (!e.accepted()) continue;
    const auto& p = e.placement();
    std::vector<NodeIndex> waypoints{net.ingress()};
    waypoints.insert(waypoints.end(), p.hosts.begin(), p.hosts.end());
    waypoints.push_back(net.egress());
    if (p.segments.size() + 1 != waypoints.size()) throw Error(Errc::InconsistentScheme, e.sfcr_id, "segment count");
    for (NodeIndex h : p.hosts) {
      if (std::find(compute.begin(), compute.end(), h) == compute.end()) {
        throw Error(Errc::InconsistentScheme, e.sfcr_id, "placement on a non-compute host");
      }
    }
    for (std::size_t s = 0; s < p.segments.size(); ++s) {
      const auto& seg = p.segments[s];
      if (seg.nodes.empty() || seg.nodes.front() != waypoints[s] || seg.nodes.back() != waypoints[s + 1] ||
          seg.links.size() + 1 != seg.nodes.size()) {
        throw Error(Errc::InconsistentScheme, e.sfcr_id, "segment " + std::to_string(s) + " does not chain");
      }
      for (std::size_t i = 0; i < seg.links.size(); ++i) {
        const auto a = net.link_endpoint_a(seg.links[i]);
        const auto b = net.link_endpoint_b(seg.links[i]);
        const bool joins = (a == seg.nodes[i] && b == seg.nodes[i + 1]) || (b == seg.nodes[i] && a == seg.nodes[i + 1]);
        if (!joins) throw Error(Errc::InconsistentScheme, e.sfcr_id, "link does not join path nodes");
      }
    }
  }
}

SfcrOutcome to_outcome(const SubstrateNetwork& net, const Embedding& e) {
  SfcrOutcome o;
  o.sfcr_id = e.sfcr_id;
  o.accepted = e.accepted();
  if (!o.accepted) {
    o.reason = describe(e.rejection());
    return o;
  }
  for (NodeIndex h : e.placement().hosts) o.hosts.push_back(net.node_id(h));
  for (const auto& seg : e.placement().segments) o.segments.push_back(node_ids(net, seg));
  return o;
}

std::vector<std::string> chromosome_hosts(const SubstrateNetwork& net, const Chromosome& c) {
  std::vector<std::string> ids;
  for (std::size_t g : c.genes) ids.push_back(net.node_id(net.compute_hosts()[g]));
  return ids;
}

template <class F>
auto in_stage(const char* stage, F&& body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  SubstrateNetwork net = in_stage("config", [&] { return SubstrateNetwork::build(cfg.network); });
  const std::vector<SfcRequest> sfcrs = in_stage("generate", [&] {
    auto out = materialize_sfcrs(cfg);
    if (out.empty()) throw Error(Errc::EmptyInput, "sfcrs", "duplicates = 0 yields no requests");
    return out;
  });

  ExperimentReport report;
  report.config_digest = cfg.digest();
  report.seed = cfg.seed;
  report.solver = std::string{to_string(cfg.solver)};

  const auto started = std::chrono::steady_clock::now();
  const EmbeddingScheme scheme = in_stage("solve", [&] {
    if (cfg.solver == SolverKind::SimpleDijkstra) return solve_simple_dijkstra(net, sfcrs, cfg.catalog);
    const Evaluator evaluator = engine_evaluator(sfcrs, cfg.catalog, cfg.engine);
    GaResult ga = ga_solve(net, sfcrs, cfg.catalog, cfg.ga, evaluator, stream_seed(cfg.seed, {kSolverStream}),
                           cfg.parallelism);
    std::vector<TraceEntry> trace;
    for (const auto& g : ga.trace) {
      trace.push_back({g.generation, g.population, g.mean_acceptance, g.min_acceptance, g.max_acceptance,
                       g.mean_latency_ms, g.min_latency_ms, g.max_latency_ms, chromosome_hosts(net, g.best),
                       g.best_fitness, g.best_so_far});
    }
    report.trace = std::move(trace);
    return std::move(ga.scheme);
  });
  report.solve_wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();

  in_stage("validate", [&] {
    validate_scheme(net, scheme);
    return 0;
  });

  report.frames = in_stage("simulate", [&] { return simulate(net, scheme, sfcrs, cfg.catalog, cfg.engine); });

  in_stage("aggregate", [&] {
    for (const auto& e : scheme.entries) report.outcomes.push_back(to_outcome(net, e));
    report.acceptance_ratio = acceptance_ratio(scheme);
    const auto accepted = report.accepted_ids();
    if (!accepted.empty() && !report.frames.empty()) report.mean_latency_ms = mean_latency(report.frames, accepted);
    return 0;
  });
  return report;
}

namespace {

Json trace_to_json(const TraceEntry& t) {
  Json pop = Json::array();
  for (const auto& f : t.population) pop.push_back(json_io::to_json(f));
  return {{"generation", t.generation},
          {"population", std::move(pop)},
          {"mean_acceptance", t.mean_acceptance},
          {"min_acceptance", t.min_acceptance},
          {"max_acceptance", t.max_acceptance},
          {"mean_latency_ms", json_io::optional_number(t.mean_latency_ms)},
          {"min_latency_ms", json_io::optional_number(t.min_latency_ms)},
          {"max_latency_ms", json_io::optional_number(t.max_latency_ms)},
          {"best_hosts", t.best_hosts},
          {"best", json_io::to_json(t.best)},
          {"best_so_far", json_io::to_json(t.best_so_far)}};
}

TraceEntry trace_from_json(const Json& j, const std::string& path) {
  ObjectReader r{j, path};
  TraceEntry t;
  t.generation = r.required<std::size_t>("generation");
  const Json& pop = r.raw("population");
  if (!pop.is_array()) ObjectReader::fail(r.child("population"), "expected array");
  for (std::size_t i = 0; i < pop.size(); ++i) {
    t.population.push_back(json_io::fitness_from_json(pop[i], r.child("population") + "[" + std::to_string(i) + "]"));
  }
  t.mean_acceptance = r.required<double>("mean_acceptance");
  t.min_acceptance = r.required<double>("min_acceptance");
  t.max_acceptance = r.required<double>("max_acceptance");
  t.mean_latency_ms = json_io::optional_number_from_json(r.raw("mean_latency_ms"), r.child("mean_latency_ms"));
  t.min_latency_ms = json_io::optional_number_from_json(r.raw("min_latency_ms"), r.child("min_latency_ms"));
  t.max_latency_ms = json_io::optional_number_from_json(r.raw("max_latency_ms"), r.child("max_latency_ms"));
  t.best_hosts = r.required<std::vector<std::string>>("best_hosts");
  t.best = json_io::fitness_from_json(r.raw("best"), r.child("best"));
  t.best_so_far = json_io::fitness_from_json(r.raw("best_so_far"), r.child("best_so_far"));
  r.finish();
  return t;
}

}  // namespace

std::string report_to_json(const ExperimentReport& report) {
  Json outcomes = Json::array();
  for (const auto& o : report.outcomes) {
    outcomes.push_back({{"sfcr_id", o.sfcr_id},
                        {"accepted", o.accepted},
                        {"reason", o.reason},
                        {"hosts", o.hosts},
                        {"segments", o.segments}});
  }
  Json frames = Json::array();
  for (const auto& f : report.frames) frames.push_back(json_io::to_json(f));
  Json root = {{"version", kReportVersion},
               {"config_digest", report.config_digest},
               {"seed", report.seed},
               {"solver", report.solver},
               {"acceptance_ratio", report.acceptance_ratio},
               {"mean_latency_ms", json_io::optional_number(report.mean_latency_ms)},
               {"outcomes", std::move(outcomes)},
               {"frames", std::move(frames)}};
  if (report.trace) {
    Json trace = Json::array();
    for (const auto& t : *report.trace) trace.push_back(trace_to_json(t));
    root["trace"] = std::move(trace);
  }
  return root.dump(2) + "\n";
}

ExperimentReport report_from_json(std::string_view document) {
  const Json root = json_io::parse(document, "report");
  ObjectReader r{root, "report"};
  if (r.required<int>("version") != kReportVersion) ObjectReader::fail("report.version", "unsupported version");
  ExperimentReport report;
  report.config_digest = r.required<std::string>("config_digest");
  report.seed = r.required<std::uint64_t>("seed");
  report.solver = r.required<std::string>("solver");
  report.acceptance_ratio = r.required<double>("acceptance_ratio");
  report.mean_latency_ms = json_io::optional_number_from_json(r.raw("mean_latency_ms"), "report.mean_latency_ms");

  const Json& outcomes = r.raw("outcomes");
  if (!outcomes.is_array()) ObjectReader::fail("report.outcomes", "expected array");
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    ObjectReader o{outcomes[i], "report.outcomes[" + std::to_string(i) + "]"};
    SfcrOutcome out;
    out.sfcr_id = o.required<std::string>("sfcr_id");
    out.accepted = o.required<bool>("accepted");
    out.reason = o.required<std::string>("reason");
    out.hosts = o.required<std::vector<std::string>>("hosts");
    const Json& segs = o.raw("segments");
    if (!segs.is_array()) ObjectReader::fail(o.child("segments"), "expected array");
    for (std::size_t s = 0; s < segs.size(); ++s) {
      out.segments.push_back(ObjectReader::convert<std::vector<std::string>>(segs[s], o.child("segments")));
    }
    o.finish();
    report.outcomes.push_back(std::move(out));
  }

  const Json& frames = r.raw("frames");
  if (!frames.is_array()) ObjectReader::fail("report.frames", "expected array");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    report.frames.push_back(json_io::frame_from_json(frames[i], "report.frames[" + std::to_string(i) + "]"));
  }
  if (r.has("trace")) {
    const Json& trace = r.raw("trace");
    if (!trace.is_array()) ObjectReader::fail("report.trace", "expected array");
    std::vector<TraceEntry> entries;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      entries.push_back(trace_from_json(trace[i], "report.trace[" + std::to_string(i) + "]"));
    }
    report.trace = std::move(entries);
  }
  r.finish();
  return report;
}

ExperimentReport read_report(const fs::path& path) {
  std::ifstream in{path, std::ios::binary};
  if (!in) throw Error(Errc::IoError, path.string(), "cannot open report");
  std::ostringstream buf;
  buf << in.rdbuf();
  return report_from_json(buf.str());
}

namespace {

std::string outcomes_csv(const ExperimentReport& report) {
  std::string out = "sfcr_id,accepted,reason\n";
  for (const auto& o : report.outcomes) {
    out += o.sfcr_id + "," + (o.accepted ? "true" : "false") + "," + o.reason + "\n";
  }
  return out;
}

std::string latency_csv(const ExperimentReport& report) {
  std::string out = "timestamp_s,sfc_id,latency_ms\n";
  for (const auto& f : report.frames) {
    for (const auto& [id, ms] : f.sfc_latency_ms) out += format_number(f.timestamp_s) + "," + id + "," + format_number(ms) + "\n";
  }
  return out;
}

std::string cpu_csv(const ExperimentReport& report) {
  std::string out = "timestamp_s,host_id,utilization\n";
  for (const auto& f : report.frames) {
    for (const auto& [id, u] : f.host_cpu) out += format_number(f.timestamp_s) + "," + id + "," + format_number(u) + "\n";
  }
  return out;
}

std::string trace_csv(const std::vector<TraceEntry>& trace) {
  std::string out = "generation,mean_ar,min_ar,max_ar,mean_latency_ms,min_latency_ms,max_latency_ms\n";
  for (const auto& t : trace) {
    out += std::to_string(t.generation) + "," + format_number(t.mean_acceptance) + "," +
           format_number(t.min_acceptance) + "," + format_number(t.max_acceptance) + "," +
           format_optional(t.mean_latency_ms) + "," + format_optional(t.min_latency_ms) + "," +
           format_optional(t.max_latency_ms) + "\n";
  }
  return out;
}

struct PendingFile {
  fs::path path;
  std::string content;
};

std::vector<fs::path> commit(const fs::path& directory, const std::vector<PendingFile>& files) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw StageError("report", "cannot create " + directory.string() + ": " + ec.message());

  std::vector<fs::path> staged;
  auto discard = [&] {
    for (const auto& p : staged) fs::remove(p, ec);
  };
  for (const auto& f : files) {
    fs::path tmp = f.path;
    tmp += ".tmp";
    std::ofstream out{tmp, std::ios::binary | std::ios::trunc};
    out << f.content;
    out.close();
    staged.push_back(tmp);
    if (!out) {
      discard();
      throw StageError("report", "cannot write " + tmp.string());
    }
  }
  std::vector<fs::path> written;
  for (std::size_t i = 0; i < files.size(); ++i) {
    fs::rename(staged[i], files[i].path, ec);
    if (ec) {
      discard();
      throw StageError("report", "cannot rename " + staged[i].string() + ": " + ec.message());
    }
    written.push_back(files[i].path);
  }
  return written;
}

}  // namespace

std::vector<fs::path> write_report(const ExperimentReport& report, const fs::path& directory, ReportFormats formats) {
  std::vector<PendingFile> files;
  if (formats.json) files.push_back({directory / "report.json", report_to_json(report)});
  if (formats.csv) {
    files.push_back({directory / "outcomes.csv", outcomes_csv(report)});
    files.push_back({directory / "latency.csv", latency_csv(report)});
    files.push_back({directory / "cpu.csv", cpu_csv(report)});
    if (report.trace) files.push_back({directory / "trace.csv", trace_csv(*report.trace)});
  }
  return commit(directory, files);
}

fs::path write_histograms(const ExperimentReport& report, const fs::path& directory, double bin_width_ms) {
  std::string out = "sfc_id,bin_lower_ms,count\n";
  try {
    for (const auto& id : sfc_ids(report.frames)) {
      for (const auto& bin : bin_latencies(report.frames, id, bin_width_ms).bins) {
        out += id + "," + format_number(bin.lower_ms) + "," + std::to_string(bin.count) + "\n";
      }
    }
  } catch (const Error& e) {
    throw StageError("aggregate", e.what());
  }
  return commit(directory, {{directory / "histogram.csv", out}}).front();
}

fs::path run_directory(const OutputConfig& output, std::chrono::system_clock::time_point now) {
  if (output.pinned) return output.directory;
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream name;
  name << "run-" << std::put_time(&tm, "%Y%m%d-%H%M%S");
  fs::path dir = output.directory / name.str();
  for (int n = 1; fs::exists(dir); ++n) dir = output.directory / (name.str() + "-" + std::to_string(n));
  return dir;
}

}  // namespace rasesim
