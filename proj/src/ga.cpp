#include "rasesim/ga.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "rasesim/error.hpp"

namespace rasesim {

namespace {

constexpr std::uint64_t kEvolutionStream = 0xE7011'7101ULL;
constexpr std::uint64_t kRandomSearchStream = 0x5EA4C4ULL;

void check_rate(double rate, const char* name) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw Error(Errc::InvalidParams, name, "must lie in [0, 1]");
}

}  // namespace

void GaParams::validate() const {
  if (population < 2) throw Error(Errc::InvalidParams, "population", "must be >= 2");
  if (tournament_k < 1) throw Error(Errc::InvalidParams, "tournament_k", "must be >= 1");
  if (elitism > population) throw Error(Errc::InvalidParams, "elitism", "must not exceed population");
  check_rate(crossover_rate, "crossover_rate");
  if (mutation_rate) check_rate(*mutation_rate, "mutation_rate");
}

double GaParams::effective_mutation_rate(std::size_t gene_count) const {
  if (mutation_rate) return *mutation_rate;
  return gene_count == 0 ? 0.0 : 1.0 / static_cast<double>(gene_count);
}

std::size_t gene_count(std::span<const SfcRequest> sfcrs) {
  std::size_t n = 0;
  for (const auto& s : sfcrs) n += s.chain.size();
  return n;
}

Chromosome random_chromosome(std::size_t genes, std::size_t host_count, Rng& rng) {
  Chromosome c;
  c.genes.resize(genes);
  for (auto& g : c.genes) g = static_cast<std::size_t>(rng.index(host_count));
  return c;
}

EmbeddingScheme decode(const Chromosome& chromosome, SubstrateNetwork& net, std::span<const SfcRequest> sfcrs,
                       const Catalog& catalog) {
  if (chromosome.genes.size() != gene_count(sfcrs)) {
    throw Error(Errc::GeneCountMismatch, "chromosome",
                std::to_string(chromosome.genes.size()) + " genes for " + std::to_string(gene_count(sfcrs)) +
                    " chain positions");
  }
  const auto hosts = net.compute_hosts();
  EmbeddingScheme scheme;
  scheme.entries.reserve(sfcrs.size());
  std::size_t offset = 0;
  for (const auto& sfcr : sfcrs) {
    const HostChooser from_genes = [&](const SubstrateNetwork&, std::size_t pos, double,
                                       double) -> std::optional<NodeIndex> {
      const std::size_t gene = chromosome.genes[offset + pos];
      if (gene >= hosts.size()) return std::nullopt;
      return hosts[gene];
    };
    scheme.entries.push_back(embed_sfcr(net, sfcr, catalog, from_genes));
    offset += sfcr.chain.size();
  }
  return scheme;
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, double crossover_rate,
                                            Rng& rng) {
  if (a.genes.size() != b.genes.size()) {
    throw Error(Errc::GeneCountMismatch, "crossover",
                std::to_string(a.genes.size()) + " vs " + std::to_string(b.genes.size()));
  }
  std::pair<Chromosome, Chromosome> children{a, b};
  if (!rng.bernoulli(crossover_rate)) return children;
  for (std::size_t i = 0; i < a.genes.size(); ++i) {
    if (rng.bernoulli(0.5)) std::swap(children.first.genes[i], children.second.genes[i]);
  }
  return children;
}

Chromosome mutate(Chromosome chromosome, double mutation_rate, std::size_t host_count, Rng& rng) {
  if (mutation_rate <= 0.0 || host_count == 0) return chromosome;
  for (auto& g : chromosome.genes) {
    if (rng.bernoulli(mutation_rate)) g = static_cast<std::size_t>(rng.index(host_count));
  }
  return chromosome;
}

std::size_t tournament_select(std::span<const Fitness> fitnesses, std::size_t k, Rng& rng) {
  if (fitnesses.empty()) throw Error(Errc::EmptyInput, "population");
  if (k < 1) throw Error(Errc::InvalidParams, "tournament_k", "must be >= 1");
  // Distinct contestants (partial Fisher-Yates), so k = n sees everyone.
  const std::size_t n = fitnesses.size();
  k = std::min(k, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::size_t winner = n;
  for (std::size_t round = 0; round < k; ++round) {
    std::swap(order[round], order[round + static_cast<std::size_t>(rng.index(n - round))]);
    const std::size_t challenger = order[round];
    if (winner == n) {
      winner = challenger;
      continue;
    }
    const auto cmp = compare_fitness(fitnesses[challenger], fitnesses[winner]);
    if (cmp > 0 || (cmp == 0 && challenger < winner)) winner = challenger;
  }
  return winner;
}

GenerationStats summarize_generation(std::size_t generation, std::span<const Chromosome> population,
                                     std::span<const Fitness> fitness, const Fitness& best_so_far) {
  GenerationStats stats;
  stats.generation = generation;
  stats.population.assign(fitness.begin(), fitness.end());
  stats.best_so_far = best_so_far;
  if (fitness.empty()) return stats;

  std::size_t best = 0;
  double ar_sum = 0.0;
  stats.min_acceptance = stats.max_acceptance = fitness[0].acceptance_ratio;
  double lat_sum = 0.0;
  std::size_t lat_n = 0;
  for (std::size_t i = 0; i < fitness.size(); ++i) {
    const auto& f = fitness[i];
    ar_sum += f.acceptance_ratio;
    stats.min_acceptance = std::min(stats.min_acceptance, f.acceptance_ratio);
    stats.max_acceptance = std::max(stats.max_acceptance, f.acceptance_ratio);
    if (f.mean_latency_ms) {
      const double l = *f.mean_latency_ms;
      lat_sum += l;
      ++lat_n;
      stats.min_latency_ms = stats.min_latency_ms ? std::min(*stats.min_latency_ms, l) : l;
      stats.max_latency_ms = stats.max_latency_ms ? std::max(*stats.max_latency_ms, l) : l;
    }
    if (is_better(f, fitness[best])) best = i;
  }
  stats.mean_acceptance = ar_sum / static_cast<double>(fitness.size());
  // Clamp guards the mean against rounding just outside [min, max].
  stats.mean_acceptance = std::clamp(stats.mean_acceptance, stats.min_acceptance, stats.max_acceptance);
  if (lat_n > 0) {
    stats.mean_latency_ms =
        std::clamp(lat_sum / static_cast<double>(lat_n), *stats.min_latency_ms, *stats.max_latency_ms);
  }
  stats.best = population[best];
  stats.best_fitness = fitness[best];
  return stats;
}

namespace {

class CandidateEvaluator {
 public:
  CandidateEvaluator(const SubstrateNetwork& net, std::span<const SfcRequest> sfcrs, const Catalog& catalog,
                     const Evaluator& evaluator, std::uint64_t seed, std::size_t parallelism)
      : net_(net),
        sfcrs_(sfcrs),
        catalog_(catalog),
        evaluator_(evaluator),
        seed_(seed),
        parallelism_(std::max<std::size_t>(1, parallelism)) {}

  Fitness evaluate(const Chromosome& c, std::uint64_t seed) const {
    SubstrateNetwork copy = net_;
    const EmbeddingScheme scheme = decode(c, copy, sfcrs_, catalog_);
    return evaluator_(EvaluationContext{c, scheme, copy, seed});
  }

  /// Evaluates population[first..] into fitness[first..], writing results by
  /// index so thread scheduling cannot affect them.
  void evaluate_range(std::size_t generation, std::span<const Chromosome> population,
                      std::span<Fitness> fitness, std::size_t first) const {
    const std::size_t count = population.size() - first;
    auto one = [&](std::size_t i) {
      fitness[i] = evaluate(population[i], stream_seed(seed_, {generation, i}));
    };
    const std::size_t workers = std::min(parallelism_, count);
    if (workers <= 1) {
      for (std::size_t i = first; i < population.size(); ++i) one(i);
      return;
    }
    std::atomic<std::size_t> next{first};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < population.size(); i = next++) {
          try {
            one(i);
          } catch (...) {
            std::lock_guard lock{failure_mutex};
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

 private:
  const SubstrateNetwork& net_;
  std::span<const SfcRequest> sfcrs_;
  const Catalog& catalog_;
  const Evaluator& evaluator_;
  std::uint64_t seed_;
  std::size_t parallelism_;
};

std::size_t require_hosts(const SubstrateNetwork& net) {
  const std::size_t n = net.compute_hosts().size();
  if (n == 0) throw Error(Errc::InvalidParams, "network", "no compute hosts available for placement");
  return n;
}

}  // namespace

GaResult ga_solve(SubstrateNetwork& net, std::span<const SfcRequest> sfcrs, const Catalog& catalog,
                  const GaParams& params, const Evaluator& evaluator, std::uint64_t seed,
                  std::size_t parallelism) {
  params.validate();
  const std::size_t hosts = require_hosts(net);
  const std::size_t genes = gene_count(sfcrs);
  const double mutation_rate = params.effective_mutation_rate(genes);
  const CandidateEvaluator eval{net, sfcrs, catalog, evaluator, seed, parallelism};
  Rng rng{stream_seed(seed, {kEvolutionStream})};

  std::vector<Chromosome> population;
  population.reserve(params.population);
  for (std::size_t i = 0; i < params.population; ++i) population.push_back(random_chromosome(genes, hosts, rng));
  std::vector<Fitness> fitness(params.population);
  eval.evaluate_range(0, population, fitness, 0);

  GaResult result;
  auto track_best = [&](std::size_t from) {
    for (std::size_t i = from; i < population.size(); ++i) {
      if (result.trace.empty() && i == 0) {
        result.best = population[0];
        result.best_fitness = fitness[0];
      } else if (is_better(fitness[i], result.best_fitness)) {
        result.best = population[i];
        result.best_fitness = fitness[i];
      }
    }
  };
  track_best(0);
  result.trace.push_back(summarize_generation(0, population, fitness, result.best_fitness));

  for (std::size_t gen = 1; gen <= params.generations; ++gen) {
    std::vector<std::size_t> order(population.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return is_better(fitness[a], fitness[b]); });

    std::vector<Chromosome> next;
    std::vector<Fitness> next_fitness(params.population);
    next.reserve(params.population);
    for (std::size_t e = 0; e < params.elitism; ++e) {
      next.push_back(population[order[e]]);
      next_fitness[e] = fitness[order[e]];
    }
    while (next.size() < params.population) {
      const auto& a = population[tournament_select(fitness, params.tournament_k, rng)];
      const auto& b = population[tournament_select(fitness, params.tournament_k, rng)];
      auto [c1, c2] = crossover(a, b, params.crossover_rate, rng);
      next.push_back(mutate(std::move(c1), mutation_rate, hosts, rng));
      if (next.size() < params.population) next.push_back(mutate(std::move(c2), mutation_rate, hosts, rng));
    }
    eval.evaluate_range(gen, next, next_fitness, params.elitism);

    population = std::move(next);
    fitness = std::move(next_fitness);
    track_best(params.elitism);
    result.trace.push_back(summarize_generation(gen, population, fitness, result.best_fitness));
  }

  result.scheme = decode(result.best, net, sfcrs, catalog);
  return result;
}

SearchResult random_search(const SubstrateNetwork& net, std::span<const SfcRequest> sfcrs,
                           const Catalog& catalog, std::size_t budget, const Evaluator& evaluator,
                           std::uint64_t seed) {
  if (budget == 0) throw Error(Errc::InvalidParams, "budget", "must be >= 1");
  const std::size_t hosts = require_hosts(net);
  const std::size_t genes = gene_count(sfcrs);
  const CandidateEvaluator eval{net, sfcrs, catalog, evaluator, seed, 1};
  Rng rng{stream_seed(seed, {kRandomSearchStream})};

  SearchResult result;
  for (std::size_t i = 0; i < budget; ++i) {
    Chromosome c = random_chromosome(genes, hosts, rng);
    const Fitness f = eval.evaluate(c, stream_seed(seed, {kRandomSearchStream, i}));
    if (i == 0 || is_better(f, result.best_fitness)) {
      result.best = std::move(c);
      result.best_fitness = f;
    }
  }
  return result;
}

}  // namespace rasesim
