// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rasesim/engine.hpp"
#include "rasesim/error.hpp"
#include "rasesim/experiment.hpp"
#include "rasesim/ga.hpp"
#include "rasesim/routing.hpp"
#include "rasesim/solver.hpp"

using namespace rasesim;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios{RASESIM_SCENARIO_DIR};
const std::string kBinary{RASESIM_BINARY};

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 3) {
  std::ostringstream out;
  out.precision(precision);
  out << std::fixed << v;
  return out.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in{p, std::ios::binary};
  return {std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("rasesim-acceptance-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int shell(const std::string& command) {
  const int status = std::system((command + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

// 1. Eight reconstruction rows, exact ratios.
Outcome acceptance_pattern() {
  const auto start = Clock::now();
  const double expected[] = {1.0, 1.0, 1.0, 0.75, 1.0, 1.0, 1.0, 1.0};
  int matched = 0;
  std::string got;
  for (int i = 0; i < 8; ++i) {
    const auto cfg = load_config(kScenarios / ("exp" + std::to_string(i + 1) + ".json"));
    const auto report = run_experiment(cfg);
    matched += report.acceptance_ratio == expected[i] ? 1 : 0;
    got += (i ? " " : "") + std::to_string(report.acceptance_ratio).substr(0, 4);
  }
  const double elapsed = seconds_since(start);
  return {matched == 8 && elapsed < 5.0,
          std::to_string(matched) + "/8 rows match [" + got + "], " + fmt(elapsed) + " s (limit 5 s)"};
}

// 2. Dijkstra against exhaustive simple-path enumeration.
Outcome dijkstra_oracle() {
  const auto start = Clock::now();
  Rng rng{20240611};
  std::size_t queries = 0;
  std::size_t mismatches = 0;
  for (int g = 0; g < 100; ++g) {
    const std::size_t n = 2 + rng.index(11);
    const auto net = SubstrateNetwork::build(oracles::random_graph(rng, n));
    for (NodeIndex src = 0; src < n; ++src) {
      for (NodeIndex dst = 0; dst < n; ++dst) {
        ++queries;
        const double min_bw = rng.bernoulli(0.5) ? 0.0 : rng.uniform(1.0, 100.0);
        const double oracle = oracles::brute_force_path_cost(net, src, dst, min_bw);
        try {
          const auto p = shortest_path(net, src, dst, min_bw);
          if (p.propagation_ms != oracle) ++mismatches;
        } catch (const Error& e) {
          if (!(e.code() == Errc::NoPath && std::isinf(oracle))) ++mismatches;
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {mismatches == 0 && elapsed < 10.0, "100 graphs, " + std::to_string(queries) + " queries, " +
                                                 std::to_string(mismatches) + " mismatches, " + fmt(elapsed) +
                                                 " s (limit 10 s)"};
}

// 3. Random solver inputs: capacities respected, charges equal the accepted
// demands, rejections leave residuals bit-identical.
struct RandomInput {
  NetworkSpec spec;
  std::vector<SfcRequest> sfcrs;
};

RandomInput random_input(Rng& rng, const Catalog& catalog) {
  RandomInput in;
  const std::size_t switches = 1 + rng.index(3);
  for (std::size_t s = 0; s < switches; ++s) {
    in.spec.switches.push_back("s" + std::to_string(s));
    if (s > 0) in.spec.links.push_back({"", "s" + std::to_string(s - 1), "s" + std::to_string(s), rng.uniform(10, 200), rng.uniform(0, 3)});
  }
  auto attach = [&](const std::string& id) {
    in.spec.links.push_back({"l" + std::to_string(in.spec.links.size()), id, "s" + std::to_string(rng.index(switches)), rng.uniform(5, 100), rng.uniform(0, 3)});
  };
  in.spec.hosts.push_back({"tg", 1, 1024});
  attach("tg");
  const std::size_t hosts = 1 + rng.index(6);
  for (std::size_t h = 0; h < hosts; ++h) {
    const std::string id = "h" + std::to_string(h);
    in.spec.hosts.push_back({id, 1 + static_cast<int>(rng.index(4)), rng.uniform(256, 4096)});
    attach(id);
    if (rng.bernoulli(0.3)) attach(id);
  }
  in.spec.hosts.push_back({"server", 1, 1024});
  attach("server");
  in.spec.ingress_node = "tg";
  in.spec.egress_host = "server";

  const std::size_t count = 1 + rng.index(10);
  for (std::size_t i = 0; i < count; ++i) {
    SfcRequest r;
    r.id = "r" + std::to_string(i);
    const std::size_t len = 1 + rng.index(4);
    for (std::size_t k = 0; k < len; ++k) r.chain.push_back(catalog.entries()[rng.index(catalog.size())].name);
    r.bandwidth_demand_mbps = rng.uniform(1, 20);
    r.request_size_bits = rng.uniform(1000, 100000);
    r.traffic = TrafficPattern{{{0, 30, rng.uniform(0, 15)}, {30, 60, rng.uniform(0, 15)}}};
    in.sfcrs.push_back(std::move(r));
  }
  return in;
}

// Recomputes every charge from the scheme and compares with the residuals.
std::size_t conservation_violations(const SubstrateNetwork& pristine, const SubstrateNetwork& net,
                                    const EmbeddingScheme& scheme, std::span<const SfcRequest> sfcrs,
                                    const Catalog& catalog) {
  std::vector<std::int64_t> cpu(net.host_count()), mem(net.host_count()), bw(net.link_count());
  for (std::size_t i = 0; i < sfcrs.size(); ++i) {
    if (!scheme.entries[i].accepted()) continue;
    const auto& p = scheme.entries[i].placement();
    for (std::size_t pos = 0; pos < p.hosts.size(); ++pos) {
      const auto& vnf = catalog.at(sfcrs[i].chain[pos]);
      cpu[p.hosts[pos]] += to_micro_units(vnf.cpu_per_request * sfcrs[i].traffic.peak_rate());
      mem[p.hosts[pos]] += to_micro_units(vnf.memory_mb);
    }
    for (const auto& seg : p.segments) {
      for (auto l : seg.links) bw[l] += to_micro_units(sfcrs[i].bandwidth_demand_mbps);
    }
  }
  std::size_t violations = 0;
  for (NodeIndex h = 0; h < net.host_count(); ++h) {
    violations += cpu[h] > pristine.residual_cpu_units(h) ? 1 : 0;
    violations += mem[h] > pristine.residual_memory_units(h) ? 1 : 0;
    violations += pristine.residual_cpu_units(h) - net.residual_cpu_units(h) != cpu[h] ? 1 : 0;
    violations += pristine.residual_memory_units(h) - net.residual_memory_units(h) != mem[h] ? 1 : 0;
  }
  for (LinkIndex l = 0; l < net.link_count(); ++l) {
    violations += bw[l] > pristine.residual_bandwidth_units(l) ? 1 : 0;
    violations += pristine.residual_bandwidth_units(l) - net.residual_bandwidth_units(l) != bw[l] ? 1 : 0;
  }
  return violations;
}

Outcome capacity_conservation() {
  const auto start = Clock::now();
  const auto catalog = default_catalog();
  Rng rng{31337};
  std::size_t inputs = 0, requests = 0, rejected = 0, violations = 0;
  for (; inputs < 1000; ++inputs) {
    const auto in = random_input(rng, catalog);
    const auto pristine = SubstrateNetwork::build(in.spec);
    const auto hosts = pristine.compute_hosts().size();
    const auto chromosome = random_chromosome(gene_count(in.sfcrs), hosts, rng);

    // Both solvers, one request at a time so every rejection is checked.
    for (int solver = 0; solver < 2; ++solver) {
      auto net = pristine;
      EmbeddingScheme scheme;
      std::size_t offset = 0;
      for (std::size_t i = 0; i < in.sfcrs.size(); ++i) {
        const std::span<const SfcRequest> one{&in.sfcrs[i], 1};
        const auto before = net;
        EmbeddingScheme step;
        if (solver == 0) {
          step = solve_simple_dijkstra(net, one, catalog);
        } else {
          Chromosome slice;
          slice.genes.assign(chromosome.genes.begin() + static_cast<std::ptrdiff_t>(offset),
                             chromosome.genes.begin() + static_cast<std::ptrdiff_t>(offset + in.sfcrs[i].chain.size()));
          step = decode(slice, net, one, catalog);
        }
        offset += in.sfcrs[i].chain.size();
        ++requests;
        if (!step.entries[0].accepted()) {
          ++rejected;
          if (!(net == before)) ++violations;
        }
        scheme.entries.push_back(step.entries[0]);
      }
      violations += conservation_violations(pristine, net, scheme, in.sfcrs, catalog);

      // The whole batch at once must agree with the incremental run.
      auto batch_net = pristine;
      const auto batch = solver == 0 ? solve_simple_dijkstra(batch_net, in.sfcrs, catalog)
                                     : decode(chromosome, batch_net, in.sfcrs, catalog);
      if (!(batch == scheme) || !(batch_net == net)) ++violations;
    }
  }
  const double elapsed = seconds_since(start);
  return {violations == 0 && rejected > 0,
          std::to_string(inputs) + " inputs x 2 solvers, " + std::to_string(requests) + " requests (" +
              std::to_string(rejected) + " rejected), " + std::to_string(violations) + " violations, " +
              fmt(elapsed) + " s"};
}

struct GaScenario {
  ExperimentConfig cfg = load_config(kScenarios / "ga_small.json");
  std::vector<SfcRequest> sfcrs = materialize_sfcrs(cfg);
  SubstrateNetwork net = SubstrateNetwork::build(cfg.network);
};

// Number of placements that accept every request, by enumerating all of them.
std::size_t feasible_placements(const GaScenario& s, std::size_t& total) {
  const std::size_t hosts = s.net.compute_hosts().size();
  const std::size_t genes = gene_count(s.sfcrs);
  total = 1;
  for (std::size_t i = 0; i < genes; ++i) total *= hosts;
  std::size_t feasible = 0;
  Chromosome c;
  c.genes.assign(genes, 0);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t x = code;
    for (auto& g : c.genes) {
      g = x % hosts;
      x /= hosts;
    }
    auto net = s.net;
    feasible += decode(c, net, s.sfcrs, s.cfg.catalog).accepted_count() == s.sfcrs.size() ? 1 : 0;
  }
  return feasible;
}

// 4. GA reaches full acceptance and does not lose latency.
Outcome ga_convergence() {
  const auto start = Clock::now();
  GaScenario s;
  std::size_t total = 0;
  const std::size_t feasible = feasible_placements(s, total);
  if (feasible == 0) return {false, "no feasible placement among " + std::to_string(total)};

  std::vector<double> final_ar;
  bool latency_ok = true;
  std::string lat;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ConfigOverrides ov;
    ov.seed = seed;
    const auto cfg = load_config(kScenarios / "ga_small.json", ov);
    const auto report = run_experiment(cfg);
    const auto& trace = *report.trace;
    const auto& init = trace.front().best;
    const auto& best = trace.back().best_so_far;
    final_ar.push_back(best.acceptance_ratio);
    const bool ok = best.mean_latency_ms && init.mean_latency_ms && *best.mean_latency_ms <= *init.mean_latency_ms;
    latency_ok = latency_ok && ok;
    lat += (seed > 1 ? ", " : "") + fmt(init.mean_latency_ms.value_or(-1), 1) + "->" +
           fmt(best.mean_latency_ms.value_or(-1), 1);
  }
  std::sort(final_ar.begin(), final_ar.end());
  const double median = final_ar[2];
  const double elapsed = seconds_since(start);
  return {median == 1.0 && latency_ok && elapsed < 60.0,
          std::to_string(feasible) + "/" + std::to_string(total) + " placements feasible; median final AR " +
              fmt(median, 2) + "; best latency ms " + lat + "; " + fmt(elapsed) + " s (limit 60 s)"};
}

// 5. GA against random search with the same number of evaluations.
Outcome ga_vs_random() {
  GaScenario s;
  const auto evaluator = engine_evaluator(s.sfcrs, s.cfg.catalog, s.cfg.engine);
  const std::size_t budget = s.cfg.ga.population * s.cfg.ga.generations;
  int wins = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto net = s.net;
    const auto ga = ga_solve(net, s.sfcrs, s.cfg.catalog, s.cfg.ga, evaluator, seed);
    const auto rs = random_search(s.net, s.sfcrs, s.cfg.catalog, budget, evaluator, seed);
    const bool win = compare_fitness(ga.best_fitness, rs.best_fitness) >= 0;
    wins += win ? 1 : 0;
    detail += (seed > 1 ? ", " : "") + fmt(ga.best_fitness.mean_latency_ms.value_or(-1), 2) + (win ? ">=" : "<") +
              fmt(rs.best_fitness.mean_latency_ms.value_or(-1), 2);
  }
  return {wins >= 4, std::to_string(wins) + "/5 seeds, budget " + std::to_string(budget) + " (GA vs random ms: " +
                         detail + ")"};
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in{line};
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// 6. trace.csv from a real run.
Outcome trace_shape() {
  const auto dir = scratch("trace");
  const int code = shell(quote(kBinary) + " run --config " + quote(kScenarios / "ga_small.json") +
                         " --output-dir " + quote(dir) + " --format csv");
  const auto cfg = load_config(kScenarios / "ga_small.json");
  std::istringstream in{slurp(dir / "trace.csv")};
  fs::remove_all(dir);
  std::string line;
  std::getline(in, line);
  const bool header = line == "generation,mean_ar,min_ar,max_ar,mean_latency_ms,min_latency_ms,max_latency_ms";
  std::size_t rows = 0, bad = 0;
  while (std::getline(in, line)) {
    ++rows;
    const auto c = split(line);
    if (c.size() != 7 || c[4].empty() || c[5].empty() || c[6].empty()) {
      ++bad;
      continue;
    }
    const double mean_ar = std::stod(c[1]), min_ar = std::stod(c[2]), max_ar = std::stod(c[3]);
    const double mean_l = std::stod(c[4]), min_l = std::stod(c[5]), max_l = std::stod(c[6]);
    if (!(min_ar <= mean_ar && mean_ar <= max_ar && min_l <= mean_l && mean_l <= max_l)) ++bad;
  }
  return {code == 0 && header && rows == cfg.ga.generations + 1 && bad == 0,
          std::to_string(rows) + " rows for " + std::to_string(cfg.ga.generations) + " generations, " +
              std::to_string(bad) + " rows with missing columns or mean outside [min, max]"};
}

// 7. Processor-sharing term and monotonicity, jitter off.
Outcome queueing_sanity() {
  const auto catalog = default_catalog();
  NetworkSpec spec;
  spec.hosts = {{"tg", 1, 1024}, {"h1", 1, 4096}, {"server", 1, 1024}};
  spec.switches = {"s"};
  spec.links = {{"", "tg", "s", 1000, 0.5}, {"", "h1", "s", 100, 1.25}, {"", "server", "s", 1000, 0.75}};
  spec.ingress_node = "tg";
  spec.egress_host = "server";
  EngineConfig quiet;
  quiet.duration_s = 10;
  quiet.jitter_sigma = 0.0;
  quiet.idle_spike_prob = 0.0;

  auto latency_at = [&](double rps, const std::vector<std::string>& chain) {
    auto net = SubstrateNetwork::build(spec);
    const std::vector<SfcRequest> sfcrs{{"s", chain, 1.0, 40000.0, TrafficPattern::constant(rps, 10)}};
    const auto scheme = solve_simple_dijkstra(net, sfcrs, catalog);
    if (!scheme.entries[0].accepted()) return std::numeric_limits<double>::quiet_NaN();
    return simulate(net, scheme, sfcrs, catalog, quiet).front().sfc_latency_ms.at("s");
  };

  // Forward tg-s-h1-s-server, retraced on return: delay in ms plus
  // 40000 bits over each link's Mbps.
  const double one_way = (0.5 + 40000 / 1e6) + 2 * (1.25 + 40000 / 1e5) + (0.75 + 40000 / 1e6);
  const double link_terms = 2 * one_way;
  // firewall: 0.03125 core-s per request at 16 rps on one core is rho = 0.5.
  const double base = catalog.at("firewall").base_service_time_ms;
  const double measured = latency_at(16.0, {"firewall"});
  const double expected = link_terms + 2 * base;
  const double rel = std::abs(measured - expected) / expected;

  bool monotone = true;
  double previous = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double v = latency_at(1.0 + 1.5 * i, {"firewall", "nat"});
    monotone = monotone && !std::isnan(v) && v >= previous;
    previous = v;
  }
  return {rel <= 1e-9 && monotone, "rho=0.5 latency " + fmt(measured, 6) + " ms vs " + fmt(expected, 6) +
                                       " ms (rel err " + [&] { std::ostringstream o; o << rel; return o.str(); }() + "), 10-point sweep " +
                                       (monotone ? "monotone" : "NOT monotone")};
}

// 8. Two full runs of the tool, byte-compared.
Outcome determinism() {
  const auto dir = scratch("determinism");
  std::size_t files = 0, differing = 0;
  bool ok = true;
  for (const char* scenario : {"exp4.json", "ga_small.json"}) {
    for (const char* run : {"a", "b"}) {
      ok = ok && shell(quote(kBinary) + " run --quiet --config " + quote(kScenarios / scenario) + " --output-dir " +
                       quote(dir / scenario / run)) == 0;
    }
    for (const auto& e : fs::directory_iterator(dir / scenario / "a")) {
      ++files;
      if (slurp(e.path()) != slurp(dir / scenario / "b" / e.path().filename())) ++differing;
    }
  }
  fs::remove_all(dir);
  return {ok && files > 0 && differing == 0,
          std::to_string(files) + " files compared across 2 scenarios, " + std::to_string(differing) + " differ"};
}

// 9. Idle-host spikes against the Binomial interval.
Outcome idle_spikes() {
  NetworkSpec spec;
  spec.hosts = {{"tg", 1, 1024}, {"idle", 2, 4096}, {"server", 1, 1024}};
  spec.switches = {"s"};
  spec.links = {{"", "tg", "s", 1000, 0.5}, {"", "idle", "s", 1000, 0.5}, {"", "server", "s", 1000, 0.5}};
  spec.ingress_node = "tg";
  spec.egress_host = "server";
  const auto net = SubstrateNetwork::build(spec);
  bool pass = true;
  std::string detail;
  for (double p : {0.01, 0.05}) {
    EngineConfig cfg;
    cfg.duration_s = 1000;
    cfg.idle_spike_prob = p;
    cfg.idle_spike_range = {0.05, 0.15};
    cfg.seed = stream_seed(2024, {static_cast<std::uint64_t>(p * 1000)});
    const auto frames = simulate(net, {}, {}, default_catalog(), cfg);
    int spikes = 0, outside = 0;
    for (const auto& f : frames) {
      const double v = f.host_cpu.at("idle");
      if (v == 0.0) continue;
      ++spikes;
      outside += (v < 0.05 || v > 0.15) ? 1 : 0;
    }
    const int lo = oracles::binomial_quantile(1000, p, 0.005);
    const int hi = oracles::binomial_quantile(1000, p, 0.995);
    pass = pass && frames.size() == 1000 && spikes >= lo && spikes <= hi && outside == 0;
    detail += (detail.empty() ? "" : "; ") + std::string("p=") + fmt(p, 2) + ": " + std::to_string(spikes) +
              " spikes in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], " + std::to_string(outside) +
              " out of range";
  }
  return {pass, detail};
}

// 10. validate on the shipped configs; a corrupted config fails cleanly.
Outcome cli_contract() {
  int ok = 0;
  for (int i = 1; i <= 8; ++i) {
    ok += shell(quote(kBinary) + " validate --config " + quote(kScenarios / ("exp" + std::to_string(i) + ".json"))) == 0;
  }
  const auto dir = scratch("cli");
  const auto text = slurp(kScenarios / "exp1.json");
  {
    std::ofstream out{dir / "corrupt.json"};
    out << text.substr(0, text.size() / 2);
  }
  const auto out_dir = dir / "out";
  const int validate = shell(quote(kBinary) + " validate --config " + quote(dir / "corrupt.json") +
                             " --output-dir " + quote(out_dir));
  const int run = shell(quote(kBinary) + " run --config " + quote(dir / "corrupt.json") + " --output-dir " +
                        quote(out_dir));
  const bool untouched = !fs::exists(out_dir);
  fs::remove_all(dir);
  return {ok == 8 && validate == 1 && run == 1 && untouched,
          std::to_string(ok) + "/8 shipped configs validate; corrupted config exits " + std::to_string(validate) +
              " (validate) and " + std::to_string(run) + " (run), " + (untouched ? "no output" : "OUTPUT WRITTEN")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Acceptance-ratio pattern", acceptance_pattern},
      {"Dijkstra oracle equivalence", dijkstra_oracle},
      {"Capacity conservation", capacity_conservation},
      {"GA convergence", ga_convergence},
      {"GA vs random search", ga_vs_random},
      {"Trace shape", trace_shape},
      {"Queueing-model sanity", queueing_sanity},
      {"Determinism", determinism},
      {"Idle-spike telemetry", idle_spikes},
      {"CLI contract", cli_contract},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string{"exception: "} + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << (i + 1) << ". " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - failed) << '/' << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
