#include "rasesim/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "rasesim/error.hpp"
#include "rasesim/experiment.hpp"

namespace rasesim {

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  std::optional<std::string> format;
  std::optional<double> bin_width;
  std::optional<std::size_t> parallel;
  bool quiet = false;
  std::string report_path;
};

void add_common(CLI::App& cmd, Options& o, bool needs_config) {
  auto* config = cmd.add_option("--config", o.config, "Experiment config file");
  if (needs_config) config->required();
  cmd.add_option("--seed", o.seed, "Override the experiment seed");
  cmd.add_option("--output-dir", o.output_dir, "Write outputs to this directory (no timestamped subdirectory)");
  cmd.add_option("--format", o.format, "Report formats")->check(CLI::IsMember({"csv", "json", "both"}));
  cmd.add_option("--bin-width", o.bin_width, "Latency histogram bin width in ms")->check(CLI::PositiveNumber);
  cmd.add_option("--parallel", o.parallel, "Concurrent GA evaluations")->check(CLI::PositiveNumber);
  cmd.add_flag("--quiet", o.quiet, "Print nothing on success");
}

ConfigOverrides overrides_of(const Options& o) {
  ConfigOverrides ov;
  ov.seed = o.seed;
  if (o.output_dir) {
    ov.output_dir = *o.output_dir;
  } else if (const char* env = std::getenv("RASE_SIM_OUTPUT"); env && *env) {
    ov.output_dir = fs::path{env};
  }
  if (o.format) ov.formats = ReportFormats::parse(*o.format);
  ov.bin_width_ms = o.bin_width;
  ov.parallelism = o.parallel;
  return ov;
}

void print_outcomes(const ExperimentReport& report, std::ostream& out) {
  for (const auto& o : report.outcomes) {
    out << o.sfcr_id << ' ';
    if (o.accepted) {
      out << "accepted";
      for (const auto& h : o.hosts) out << ' ' << h;
    } else {
      out << "rejected " << o.reason;
    }
    out << '\n';
  }
  out << "acceptance_ratio=" << report.acceptance_ratio << '\n';
}

int cmd_validate(const Options& o, std::ostream& out) {
  const auto cfg = load_config(o.config, overrides_of(o));
  if (!o.quiet) out << "ok " << o.config << " digest=" << cfg.digest() << '\n';
  return kOk;
}

int cmd_run(const Options& o, std::ostream& out) {
  const auto cfg = load_config(o.config, overrides_of(o));
  const auto report = run_experiment(cfg);
  const fs::path dir = run_directory(cfg.output, std::chrono::system_clock::now());
  auto files = write_report(report, dir, cfg.output.formats);
  if (cfg.output.formats.csv) files.push_back(write_histograms(report, dir, cfg.output.bin_width_ms));
  if (!o.quiet) {
    out << "acceptance_ratio=" << report.acceptance_ratio << '\n';
    for (const auto& f : files) out << "wrote " << f.string() << '\n';
  }
  return kOk;
}

int cmd_solve(const Options& o, std::ostream& out) {
  const auto cfg = load_config(o.config, overrides_of(o));
  const auto report = run_experiment(cfg);
  if (!o.quiet) print_outcomes(report, out);
  return kOk;
}

int cmd_generate(const Options& o, std::ostream& out) {
  const auto cfg = load_config(o.config, overrides_of(o));
  std::vector<SfcRequest> sfcrs;
  try {
    sfcrs = materialize_sfcrs(cfg);
  } catch (const Error& e) {
    throw StageError("generate", e.what());
  }
  const fs::path dir = run_directory(cfg.output, std::chrono::system_clock::now());
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path path = dir / "sfcrs.json";
  std::ofstream file{path, std::ios::binary | std::ios::trunc};
  file << dump_sfcrs(sfcrs);
  file.close();
  if (ec || !file) throw StageError("report", "cannot write " + path.string());
  if (!o.quiet) out << "wrote " << sfcrs.size() << " requests to " << path.string() << '\n';
  return kOk;
}

int cmd_report(const Options& o, std::ostream& out) {
  ExperimentReport report;
  try {
    report = read_report(o.report_path);
  } catch (const Error& e) {
    throw StageError("report", e.what());
  }
  fs::path dir = fs::path{o.report_path}.parent_path();
  if (const auto ov = overrides_of(o); ov.output_dir) dir = *ov.output_dir;
  const double width = o.bin_width.value_or(OutputConfig{}.bin_width_ms);
  ReportFormats formats{false, true};
  if (o.format) formats = ReportFormats::parse(*o.format);
  // The source report.json is never rewritten in place.
  if (dir == fs::path{o.report_path}.parent_path()) formats.json = false;
  auto files = write_report(report, dir, formats);
  files.push_back(write_histograms(report, dir, width));
  if (!o.quiet) {
    for (const auto& f : files) out << "wrote " << f.string() << '\n';
  }
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic SFC embedding simulator", "rase_sim"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every command");

  Options o;
  auto* run = app.add_subcommand("run", "Solve, simulate and write reports");
  auto* solve = app.add_subcommand("solve", "Solve only and print per-request outcomes");
  auto* generate = app.add_subcommand("generate", "Write the generated requests to sfcrs.json");
  auto* report = app.add_subcommand("report", "Rebuild CSV and histogram files from report.json");
  auto* validate = app.add_subcommand("validate", "Check a config and exit");
  for (auto* cmd : {run, solve, generate, validate}) add_common(*cmd, o, true);
  add_common(*report, o, false);
  report->add_option("report", o.report_path, "Path to report.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (run->parsed()) return cmd_run(o, out);
    if (solve->parsed()) return cmd_solve(o, out);
    if (generate->parsed()) return cmd_generate(o, out);
    if (report->parsed()) return cmd_report(o, out);
    return cmd_validate(o, out);
  } catch (const StageError& e) {
    err << "error: " << e.what() << '\n';
    return e.is_config_error() ? kConfigError : kRuntimeError;
  } catch (const Error& e) {
    const bool config = e.code() == Errc::ConfigError;
    err << "error: " << (config ? "config" : "runtime") << ": " << e.what() << '\n';
    return config ? kConfigError : kRuntimeError;
  } catch (const std::exception& e) {
    err << "error: runtime: " << e.what() << '\n';
    return kRuntimeError;
  }
}

int run_cli(int argc, const char* const* argv) { return run_cli(argc, argv, std::cout, std::cerr); }

}  // namespace rasesim
