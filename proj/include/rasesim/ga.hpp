#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rasesim/catalog.hpp"
#include "rasesim/rng.hpp"
#include "rasesim/solver.hpp"
#include "rasesim/topology.hpp"

namespace rasesim {

/// One gene per (request, chain position), request-major. Each gene is an
/// index into SubstrateNetwork::compute_hosts().
struct Chromosome {
  std::vector<std::size_t> genes;

  friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

struct GaParams {
  std::size_t population = 20;
  std::size_t generations = 10;
  std::size_t tournament_k = 3;
  double crossover_rate = 0.9;
  std::optional<double> mutation_rate;  // nullopt: 1 / gene count
  std::size_t elitism = 2;

  /// Throws InvalidParams.
  void validate() const;
  double effective_mutation_rate(std::size_t gene_count) const;

  friend bool operator==(const GaParams&, const GaParams&) = default;
};

std::size_t gene_count(std::span<const SfcRequest> sfcrs);

/// Uniform host per gene.
Chromosome random_chromosome(std::size_t genes, std::size_t host_count, Rng& rng);

/// Charges the chromosome's placements onto `net` request by request,
/// rejecting (with rollback) any request whose placement or routing is
/// infeasible. Throws GeneCountMismatch.
EmbeddingScheme decode(const Chromosome& chromosome, SubstrateNetwork& net, std::span<const SfcRequest> sfcrs,
                       const Catalog& catalog);

/// With probability crossover_rate, exchange each gene with probability
/// 1/2; otherwise return the parents unchanged. Throws GeneCountMismatch.
std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, double crossover_rate,
                                            Rng& rng);

/// Each gene is redrawn uniformly over the hosts with probability
/// mutation_rate.
Chromosome mutate(Chromosome chromosome, double mutation_rate, std::size_t host_count, Rng& rng);

/// Best of k distinct uniformly drawn candidates (k is clamped to the
/// population size) under compare_fitness; ties go to the lower population
/// index. Returns the index of the winner.
std::size_t tournament_select(std::span<const Fitness> fitnesses, std::size_t k, Rng& rng);

/// What a fitness evaluation sees: the candidate, its decoded scheme, the
/// network as charged by that scheme, and a private RNG stream seed.
struct EvaluationContext {
  const Chromosome& chromosome;
  const EmbeddingScheme& scheme;
  const SubstrateNetwork& network;
  std::uint64_t seed;
};

using Evaluator = std::function<Fitness(const EvaluationContext&)>;

struct GenerationStats {
  std::size_t generation = 0;
  std::vector<Fitness> population;
  double mean_acceptance = 0.0;
  double min_acceptance = 0.0;
  double max_acceptance = 0.0;
  // Over members with defined latency; nullopt when none.
  std::optional<double> mean_latency_ms;
  std::optional<double> min_latency_ms;
  std::optional<double> max_latency_ms;
  Chromosome best;
  Fitness best_fitness;
  Fitness best_so_far;

  friend bool operator==(const GenerationStats&, const GenerationStats&) = default;
};

using EvolutionTrace = std::vector<GenerationStats>;

GenerationStats summarize_generation(std::size_t generation, std::span<const Chromosome> population,
                                     std::span<const Fitness> fitness, const Fitness& best_so_far);

struct GaResult {
  Chromosome best;
  Fitness best_fitness;
  EmbeddingScheme scheme;
  EvolutionTrace trace;
};

/// Generational GA with elitism, tournament selection, uniform crossover
/// and reassignment mutation. Candidate i of generation g is evaluated on
/// its own network copy with seed stream_seed(seed, {g, i}); `parallelism`
/// bounds concurrent evaluations and does not change the result. On return
/// `net` holds the charges of the best chromosome ever evaluated.
GaResult ga_solve(SubstrateNetwork& net, std::span<const SfcRequest> sfcrs, const Catalog& catalog,
                  const GaParams& params, const Evaluator& evaluator, std::uint64_t seed,
                  std::size_t parallelism = 1);

struct SearchResult {
  Chromosome best;
  Fitness best_fitness;
};

/// Baseline: `budget` uniformly random chromosomes, evaluated like ga_solve.
SearchResult random_search(const SubstrateNetwork& net, std::span<const SfcRequest> sfcrs,
                           const Catalog& catalog, std::size_t budget, const Evaluator& evaluator,
                           std::uint64_t seed);

}  // namespace rasesim
