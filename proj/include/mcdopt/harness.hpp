#pragma once

// Experiment runner and reporting: algorithm x function x budget grids over
// the benchmark suite, Error / IAR / win-tie-loss aggregation, CSV and JSON
// results, and SVG convergence plots.
//
// Output directory layout:
//   config.txt            resolved configuration (key = value)
//   results.csv           one row per run
//   traces/<alg>__<fn>__<max_nfe>__<seed>.csv   improvement trace per run,
//                         best evaluated value minus the optimum value
//   summary.json          aggregates, IAR and w/t/l per baseline and budget
//   plots/<fn>__<max_nfe>.svg                   mean convergence per algorithm
//
// summary.json and the plots are derived from the CSV files only, so
// `report` regenerates them byte for byte.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcdopt/core.hpp"

namespace mcdopt::harness {

struct LengthMismatch : Error {
  using Error::Error;
};

enum class Algorithm { Mcd, De, Cc };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& s);

struct ExperimentConfig {
  std::vector<Algorithm> algorithms{Algorithm::Mcd, Algorithm::De};
  std::vector<std::string> functions;  // empty = whole suite
  std::size_t dim = 100;
  std::vector<std::uint64_t> max_nfe{10000};
  std::vector<std::uint64_t> max_iter{10};  // one value, or one per max_nfe
  std::size_t repeats = 3;
  std::uint64_t base_seed = 1;
  std::uint64_t suite_seed = 2021;
  std::vector<std::uint64_t> trace_grid;  // empty = 20 even checkpoints
  std::filesystem::path output_dir = "results";
  std::size_t threads = 1;
  double tie_epsilon = 0.0;
  bool record_wall_time = false;

  std::size_t de_pop_size = 50;
  double de_cr = 0.9;
  double de_f_low = 0.2;
  double de_f_high = 0.8;
  std::size_t cc_pop_size = 50;
  double cc_f = 0.5;
  double cc_cr = 0.9;
  std::size_t cc_groups = 10;

  std::uint64_t max_iter_for(std::size_t budget_index) const;
  std::vector<std::uint64_t> grid_for(std::uint64_t max_nfe) const;

  /// Throws ConfigError for inconsistent settings and InsufficientBudget
  /// when a budget cannot fit one pass of some algorithm.
  void validate() const;
};

/// `key = value` lines, `#` comments, comma-separated lists. Unknown keys
/// are errors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& cfg);

/// Output directory override.
inline constexpr const char* kOutputDirEnv = "MCDOPT_OUTPUT_DIR";
void apply_env_overrides(ExperimentConfig& cfg);

//------------------------------------------------------------------------------
// Metrics
//------------------------------------------------------------------------------

struct Iar {
  double value;
  bool zero_denominator = false;  // MCD error was 0; value is +inf (or 1 if both are 0)

  bool mcd_better() const { return value > 1.0; }
};

/// baseline error / MCD error.
Iar compute_iar(double err_baseline, double err_mcd);

struct Wtl {
  std::size_t wins = 0;
  std::size_t ties = 0;
  std::size_t losses = 0;

  friend bool operator==(const Wtl&, const Wtl&) = default;
};

/// Per function: win if mcd < baseline, tie if equal (or within the
/// relative epsilon), loss otherwise.
Wtl tally_wtl(const std::vector<double>& errors_mcd, const std::vector<double>& errors_baseline,
              double rel_epsilon = 0.0);

/// Best-so-far value at each checkpoint (carry forward); nullopt before
/// the first improvement.
std::vector<std::optional<double>> densify(const std::vector<TracePoint>& trace,
                                           const std::vector<std::uint64_t>& grid);

//------------------------------------------------------------------------------
// Runs and reports
//------------------------------------------------------------------------------

struct RunRecord {
  Algorithm algorithm = Algorithm::Mcd;
  std::string function;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::uint64_t max_nfe = 0;
  std::uint64_t used_nfe = 0;
  double final_error = 0;  // NaN for failed runs
  std::optional<double> wall_ms;
  std::vector<TracePoint> trace;  // best_value holds the error (value - optimum)
  std::string failure;  // empty on success

  bool ok() const { return failure.empty(); }
};

struct Aggregate {
  Algorithm algorithm;
  std::string function;
  std::uint64_t max_nfe;
  std::size_t runs = 0;
  std::size_t failed = 0;
  double mean_error = 0;  // over successful runs; NaN if none
};

struct FunctionComparison {
  std::string function;
  double mcd_error;
  double baseline_error;
  Iar iar;
};

struct Comparison {
  Algorithm baseline;
  std::uint64_t max_nfe;
  std::vector<FunctionComparison> functions;
  Wtl wtl;
};

struct ExperimentReport {
  std::vector<RunRecord> runs;
  std::vector<Aggregate> aggregates;
  std::vector<Comparison> comparisons;

  const Aggregate* find(Algorithm a, const std::string& fn, std::uint64_t max_nfe) const;
};

/// One run of one algorithm on one suite function with a fresh evaluator.
RunRecord run_single(const ExperimentConfig& cfg, Algorithm alg, const Objective& fn,
                     const std::string& fn_name, std::uint64_t max_nfe, std::uint64_t max_iter,
                     std::uint64_t seed);

/// Aggregates, IARs and w/t/l from run records (no I/O).
ExperimentReport summarize(std::vector<RunRecord> runs, double tie_epsilon);

/// Executes the grid, writes every output file, returns the report.
ExperimentReport run_grid(const ExperimentConfig& cfg);

/// Re-derives summary.json and plots from the CSV files in `dir`.
ExperimentReport report_dir(const std::filesystem::path& dir);

std::string results_csv(const std::vector<RunRecord>& runs);
std::vector<RunRecord> parse_results_csv(const std::string& text);
std::string trace_csv(const std::vector<TracePoint>& trace);
std::vector<TracePoint> parse_trace_csv(const std::string& text);
std::string trace_file_name(const RunRecord& r);
std::string summary_json(const ExperimentReport& report);

/// Mean-error convergence chart for one function and budget.
std::string convergence_svg(const ExperimentReport& report, const std::string& function,
                            std::uint64_t max_nfe, const std::vector<std::uint64_t>& grid);

}  // namespace mcdopt::harness
