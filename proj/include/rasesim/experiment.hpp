#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rasesim/catalog.hpp"
#include "rasesim/engine.hpp"
#include "rasesim/ga.hpp"
#include "rasesim/solver.hpp"
#include "rasesim/telemetry.hpp"
#include "rasesim/topology.hpp"

namespace rasesim {

/// A failure in one lifecycle stage ("config", "generate", "solve",
/// "simulate", "aggregate", "report"). Config failures happen before any work
/// is done.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message);

  const std::string& stage() const noexcept { return stage_; }
  bool is_config_error() const noexcept { return stage_ == "config"; }

 private:
  std::string stage_;
};

enum class SolverKind { SimpleDijkstra, Ga };

std::string_view to_string(SolverKind kind);

struct ReportFormats {
  bool json = true;
  bool csv = true;

  /// "json", "csv" or "both"; throws ConfigError otherwise.
  static ReportFormats parse(std::string_view text);
  friend bool operator==(const ReportFormats&, const ReportFormats&) = default;
};

struct OutputConfig {
  std::filesystem::path directory{"results"};
  ReportFormats formats;
  double bin_width_ms = 50.0;
  /// When false, run() writes to a timestamped subdirectory of `directory`.
  bool pinned = false;
};

struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
  std::optional<ReportFormats> formats;
  std::optional<double> bin_width_ms;
  std::optional<std::size_t> parallelism;
};

struct ExperimentConfig {
  NetworkSpec network;
  Catalog catalog;
  std::vector<SfcRequest> templates;
  std::size_t duplicates = 1;
  SolverKind solver = SolverKind::SimpleDijkstra;
  GaParams ga;
  EngineConfig engine;  // engine.seed is the effective simulation seed
  OutputConfig output;
  std::uint64_t seed = 0;
  std::size_t parallelism = 1;

  /// Stable hex digest of everything that determines results (all sections
  /// except `output`).
  std::string digest() const;
};

/// Parses a config document. Relative file references (`network`,
/// `catalog`, `sfcrs` given as strings) resolve against base_dir. Every
/// section is validated, so a returned config is runnable. Throws
/// StageError("config").
ExperimentConfig parse_config(std::string_view document, const std::filesystem::path& base_dir,
                              const ConfigOverrides& overrides = {});
ExperimentConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

/// Fitness evaluator that simulates the decoded scheme with `engine`, using
/// the candidate's stream seed.
Evaluator engine_evaluator(std::span<const SfcRequest> sfcrs, const Catalog& catalog, EngineConfig engine);

struct SfcrOutcome {
  std::string sfcr_id;
  bool accepted = false;
  std::string reason;  // empty when accepted
  std::vector<std::string> hosts;
  std::vector<std::vector<std::string>> segments;

  friend bool operator==(const SfcrOutcome&, const SfcrOutcome&) = default;
};

struct TraceEntry {
  std::size_t generation = 0;
  std::vector<Fitness> population;
  double mean_acceptance = 0.0;
  double min_acceptance = 0.0;
  double max_acceptance = 0.0;
  std::optional<double> mean_latency_ms;
  std::optional<double> min_latency_ms;
  std::optional<double> max_latency_ms;
  std::vector<std::string> best_hosts;
  Fitness best;
  Fitness best_so_far;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct ExperimentReport {
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string solver;
  std::vector<SfcrOutcome> outcomes;
  double acceptance_ratio = 0.0;
  std::optional<double> mean_latency_ms;
  std::vector<TelemetryFrame> frames;
  std::optional<std::vector<TraceEntry>> trace;  // GA runs only
  // Wall-clock time of the solve stage. Run metadata: it is not persisted
  // and does not take part in equality, so identical configs give
  // identical reports.
  double solve_wall_ms = 0.0;

  std::vector<std::string> accepted_ids() const;
  friend bool operator==(const ExperimentReport& a, const ExperimentReport& b);
};

/// generate -> solve -> validate -> simulate -> aggregate. Deterministic in
/// cfg.seed. Throws StageError naming the failing stage.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Requests generated from the config's templates.
std::vector<SfcRequest> materialize_sfcrs(const ExperimentConfig& cfg);

std::string report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(std::string_view document);
ExperimentReport read_report(const std::filesystem::path& path);

/// Writes report.json and/or outcomes.csv, latency.csv, cpu.csv and (GA)
/// trace.csv. Files are staged under temporary names and renamed once all
/// were written. Returns the final paths. Throws StageError("report").
std::vector<std::filesystem::path> write_report(const ExperimentReport& report,
                                                const std::filesystem::path& directory, ReportFormats formats);

/// histogram.csv (sfc_id, bin_lower_ms, count) for every chain.
std::filesystem::path write_histograms(const ExperimentReport& report, const std::filesystem::path& directory,
                                       double bin_width_ms);

/// The directory a run writes to: output.directory when pinned, otherwise a
/// fresh "run-YYYYmmdd-HHMMSS[-n]" subdirectory of it.
std::filesystem::path run_directory(const OutputConfig& output, std::chrono::system_clock::time_point now);

}  // namespace rasesim
