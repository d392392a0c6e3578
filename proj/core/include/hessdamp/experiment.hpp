#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hessdamp/optimizers.hpp"
#include "hessdamp/rates.hpp"

namespace hessdamp {

enum class Emit { kCsv, kSummary, kChecks };

std::string_view to_string(Emit e);
Emit parse_emit(std::string_view text);

struct RunSpec {
  std::string label;
  AlgorithmConfig config;
  Point x0;
  std::optional<Point> x1;  // defaults to x0
  StoppingRule stop;
};

struct ExperimentConfig {
  std::string name;
  std::string problem;
  std::vector<RunSpec> runs;
  /// Each seed replaces the seed of every run's perturbation.
  std::vector<std::uint64_t> seeds{0};
  std::filesystem::path outputs = ".";
  std::set<Emit> emit{Emit::kCsv, Emit::kSummary, Emit::kChecks};
};

/// Comma-separated coordinates; a single value is broadcast to `dim`.
/// Throws kParseError or kDimensionMismatch.
Point parse_point(std::string_view text, Index dim);

/// "1,2,5" or "1..10" or a mix.
std::vector<std::uint64_t> parse_seeds(std::string_view text);

/// fig12, fig34 or fig45. Throws kUnknownPreset.
ExperimentConfig preset(std::string_view name);

/// INI-style file:
///
///   [experiment]
///   name = custom
///   problem = example51
///   seeds = 1,2,3
///   emit = csv,summary,checks
///   out_dir = results
///
///   [run:iaa]
///   algo = iaa
///   alpha = 0.3
///   beta = 0.2
///   step = 1/L
///   x0 = 3
///   tol = 1e-10
///   max_iter = 100000
///   perturb = none
///
/// `tol = none` runs to max_iter. `step` defaults to 1/L. `seeds` accepts
/// comma lists and inclusive ranges "a..b". Unknown keys are rejected.
/// Throws kParseError / kIoError.
ExperimentConfig parse_experiment_config(std::istream& is);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct RunSummary {
  std::string label;
  std::uint64_t seed = 0;
  Variant variant = Variant::kIaa;
  std::int64_t iterations = 0;
  StopReason reason = StopReason::kMaxIter;
  double final_value_error = 0.0;
  std::optional<double> final_dist;
  double oscillation = 0.0;
  std::optional<RateFit> rate;  // exponential when unperturbed, power otherwise
  std::int64_t grad_evals = 0;
};

struct CheckResult {
  std::string name;
  std::string label;
  std::uint64_t seed = 0;
  bool pass = false;
  std::string detail;
};

struct ComparisonSummary {
  std::string experiment;
  std::vector<RunSummary> runs;
  /// Run labels by mean iterations to tolerance; runs that never reached it
  /// come last in config order.
  std::vector<std::string> ordering;
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;

  bool checks_pass() const;
};

/// Runs every (run, seed) pair and evaluates theorem-bound checks for IAA runs
/// whose parameters fall inside the T41 (unperturbed) or T42 (perturbed) box.
/// Writes `<label>_seed<seed>.csv`, `summary.txt` and `checks.txt` into
/// cfg.outputs according to cfg.emit. Run errors are rethrown with the label
/// prepended.
ComparisonSummary execute(const ExperimentConfig& cfg);

void write_summary(std::ostream& os, const ComparisonSummary& summary);
void write_checks(std::ostream& os, const ComparisonSummary& summary);

}  // namespace hessdamp
