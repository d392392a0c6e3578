#include "hessdamp/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <system_error>

#include "hessdamp/analysis.hpp"
#include "hessdamp/csv.hpp"
#include "hessdamp/error.hpp"
#include "hessdamp/problems.hpp"

namespace hessdamp {

std::string_view to_string(Emit e) {
  switch (e) {
    case Emit::kCsv: return "csv";
    case Emit::kSummary: return "summary";
    case Emit::kChecks: return "checks";
  }
  return "unknown";
}

Emit parse_emit(std::string_view text) {
  if (text == "csv") return Emit::kCsv;
  if (text == "summary") return Emit::kSummary;
  if (text == "checks") return Emit::kChecks;
  throw Error(ErrorCode::kParseError, "unknown emit kind '" + std::string(text) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_real(std::string_view text, std::string_view what) {
  const std::string_view t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw Error(ErrorCode::kParseError,
                std::string(what) + ": expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

template <typename Int>
Int to_int(std::string_view text, std::string_view what) {
  const std::string_view t = trim(text);
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw Error(ErrorCode::kParseError,
                std::string(what) + ": expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

Point scalar_point(double v, Index dim) { return Point::Constant(dim, v); }

}  // namespace

Point parse_point(std::string_view text, Index dim) {
  const auto parts = split(text, ',');
  if (parts.size() == 1) return scalar_point(to_real(parts[0], "point"), dim);
  if (static_cast<Index>(parts.size()) != dim) {
    throw Error(ErrorCode::kDimensionMismatch, "point '" + std::string(text) + "' has " +
                                                   std::to_string(parts.size()) +
                                                   " coordinates, expected " + std::to_string(dim));
  }
  Point x(dim);
  for (Index i = 0; i < dim; ++i) x[i] = to_real(parts[static_cast<std::size_t>(i)], "point");
  return x;
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  for (const auto part : split(text, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string_view::npos) {
      seeds.push_back(to_int<std::uint64_t>(part, "seeds"));
      continue;
    }
    const auto lo = to_int<std::uint64_t>(part.substr(0, dots), "seeds");
    const auto hi = to_int<std::uint64_t>(part.substr(dots + 2), "seeds");
    if (hi < lo) throw Error(ErrorCode::kParseError, "empty seed range '" + std::string(part) + "'");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  return seeds;
}

// ---------------------------------------------------------------------------
// Presets

namespace {

RunSpec make_run(std::string label, Variant v, double alpha, double beta, double theta, double s,
                 Point x0, StoppingRule stop, PerturbationSpec perturb = {}) {
  RunSpec r;
  r.label = std::move(label);
  r.config.variant = v;
  r.config.alpha = alpha;
  r.config.beta = beta;
  r.config.theta = theta;
  r.config.s = s;
  r.config.perturb = perturb;
  r.x0 = std::move(x0);
  r.stop = stop;
  return r;
}

ExperimentConfig example51_comparison(std::string name, std::int64_t max_iter) {
  ExperimentConfig cfg;
  cfg.name = std::move(name);
  cfg.problem = "example51";
  const StoppingRule stop{1e-10, max_iter};
  const Point x0 = scalar_point(3.0, 1);
  const double b = 1.0 / 24.0;
  cfg.runs = {
      make_run("iaa", Variant::kIaa, 0.3, 0.2, 0.0, 1.0 / 6.0, x0, stop),
      make_run("hbm", Variant::kHbm, 0.7, b, 0.0, 0.0, x0, stop),
      make_run("nag", Variant::kNag, 0.7, b, 0.0, 0.0, x0, stop),
      make_run("hbm-h", Variant::kHbmH, 0.7, b, 0.05, 0.0, x0, stop),
      make_run("nag-h", Variant::kNagH, 0.7, b, 0.05, 0.0, x0, stop),
  };
  return cfg;
}

ExperimentConfig example52_comparison() {
  ExperimentConfig cfg;
  cfg.name = "fig45";
  cfg.problem = "example52";
  const StoppingRule stop{std::nullopt, 200};
  const Point x0 = scalar_point(3.0, 2);
  const PerturbationSpec noise = PerturbationSpec::gaussian_decay(0.001, 0.01, 0);
  cfg.runs = {
      make_run("iaa-per", Variant::kIaa, 0.4, 0.15, 0.0, 0.125, x0, stop, noise),
      make_run("hbm", Variant::kHbm, 0.7, 0.04, 0.0, 0.0, x0, stop, noise),
      make_run("nag", Variant::kNag, 0.7, 0.04, 0.0, 0.0, x0, stop, noise),
      make_run("hbm-h", Variant::kHbmH, 0.7, 0.04, 0.05, 0.0, x0, stop, noise),
      make_run("nag-h", Variant::kNagH, 0.7, 0.04, 0.05, 0.0, x0, stop, noise),
  };
  cfg.seeds.clear();
  for (std::uint64_t s = 1; s <= 10; ++s) cfg.seeds.push_back(s);
  return cfg;
}

}  // namespace

ExperimentConfig preset(std::string_view name) {
  if (name == "fig12") return example51_comparison("fig12", 100000);
  if (name == "fig34") return example51_comparison("fig34", 50);
  if (name == "fig45") return example52_comparison();
  throw Error(ErrorCode::kUnknownPreset,
              "unknown preset '" + std::string(name) + "' (expected fig12, fig34 or fig45)");
}

// ---------------------------------------------------------------------------
// Execution

namespace {

std::optional<RateFit> fit_run(std::span<const IterateRecord> records, bool perturbed) {
  std::vector<SeriesPoint> series = value_error_series(records);
  RateKind kind = RateKind::kExponential;
  if (perturbed) {
    // Power fits need positive indices.
    series.erase(series.begin());
    kind = RateKind::kPower;
  }
  for (const double wf : {0.5, 1.0}) {
    try {
      return fit_rate(series, kind, wf);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInsufficientData) throw;
    }
  }
  return std::nullopt;
}

std::string format_short(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

CheckResult to_check(const BoundCheck& b, const RunSpec& run, std::uint64_t seed) {
  CheckResult c;
  c.name = b.name;
  c.label = run.label;
  c.seed = seed;
  c.pass = b.pass;
  c.detail = "worst lhs/rhs = " + format_short(b.worst_ratio) + " at k = " +
             std::to_string(b.worst_k) + " over " + std::to_string(b.evaluated) + " indices";
  return c;
}

bool unit_step(const Problem& p, double s) { return std::abs(s * p.lipschitz() - 1.0) <= 1e-12; }

void theorem_checks(const Problem& p, const RunSpec& run, const AlgorithmConfig& cfg,
                    std::uint64_t seed, std::span<const IterateRecord> records,
                    const std::optional<RateFit>& fit, std::vector<CheckResult>& out) {
  if (cfg.variant != Variant::kIaa || records.size() < 2 || !p.min_value() || !p.minimizer()) {
    return;
  }
  if (!unit_step(p, cfg.s)) return;
  if (cfg.perturb.is_none()) {
    if (!strictly_inside(p, Theorem::kT41, cfg.alpha, cfg.beta)) return;
    for (const BoundCheck& b : certify_linear_rate(p, cfg, records)) {
      out.push_back(to_check(b, run, seed));
    }
    if (fit) {
      const double rho = *rate_constants(p, Theorem::kT41, cfg.alpha, cfg.beta, cfg.s).rho;
      const double floor = -std::log1p(-rho);
      CheckResult c;
      c.name = "T41 fitted exponential rate >= -ln(1-rho)";
      c.label = run.label;
      c.seed = seed;
      c.pass = fit->rate >= floor;
      c.detail = "fitted " + format_short(fit->rate) + " vs floor " + format_short(floor);
      out.push_back(std::move(c));
    }
  } else {
    if (!strictly_inside(p, Theorem::kT42, cfg.alpha, cfg.beta)) return;
    out.push_back(to_check(certify_perturbed_energy(p, cfg, records), run, seed));
  }
}

std::string csv_comment(const ExperimentConfig& cfg, const RunSpec& run,
                        const AlgorithmConfig& ac, std::uint64_t seed) {
  std::ostringstream os;
  os << "experiment=" << cfg.name << " problem=" << cfg.problem << " run=" << run.label
     << " seed=" << seed << '\n'
     << "algo=" << to_string(ac.variant) << " alpha=" << csv::format_real(ac.alpha)
     << " beta=" << csv::format_real(ac.beta) << " theta=" << csv::format_real(ac.theta)
     << " s=" << csv::format_real(ac.s) << " perturb=" << to_string(ac.perturb) << '\n'
     << "perturbation enters as +s*eps_k for iaa and +beta*eps_k for the baselines";
  return os.str();
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kIoError, "cannot create output directory '" + dir.string() + "'");
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "' for writing");
  return os;
}

void close_output(std::ofstream& os, const std::filesystem::path& path) {
  os.close();
  if (!os) throw Error(ErrorCode::kIoError, "failed writing '" + path.string() + "'");
}

}  // namespace

bool ComparisonSummary::checks_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

ComparisonSummary execute(const ExperimentConfig& cfg) {
  ComparisonSummary summary;
  summary.experiment = cfg.name;
  {
    std::set<std::string> labels;
    for (const RunSpec& r : cfg.runs) {
      if (!labels.insert(r.label).second) {
        throw Error(ErrorCode::kInvalidArgument, "duplicate run label '" + r.label + "'");
      }
    }
  }
  if (!cfg.emit.empty()) ensure_directory(cfg.outputs);
  if (cfg.seeds.empty()) throw Error(ErrorCode::kInvalidArgument, "seed list is empty");

  std::optional<Problem> problem;
  if (!cfg.runs.empty()) problem.emplace(builtin_problem(cfg.problem));

  for (const RunSpec& run_spec : cfg.runs) {
    bool first_seed = true;
    for (const std::uint64_t seed : cfg.seeds) {
      AlgorithmConfig ac = run_spec.config;
      ac.perturb.seed = seed;
      RunResult result;
      try {
        result = run(*problem, ac, run_spec.x0, run_spec.x1.value_or(run_spec.x0), run_spec.stop);
      } catch (const Error& e) {
        throw Error(e.code(),
                    "run '" + run_spec.label + "' seed " + std::to_string(seed) + ": " + e.message());
      }
      if (first_seed) {
        for (const std::string& w : result.warnings) {
          summary.warnings.push_back(run_spec.label + ": " + w);
        }
        first_seed = false;
      }
      const std::vector<IterateRecord>& recs = result.records;
      const IterateRecord& last = recs.back();

      RunSummary rs;
      rs.label = run_spec.label;
      rs.seed = seed;
      rs.variant = ac.variant;
      rs.iterations = last.k;
      rs.reason = result.reason;
      rs.final_value_error = last.value_error;
      rs.final_dist = last.dist;
      rs.oscillation = recs.size() >= 3 ? oscillation_metric(std::span<const IterateRecord>(recs))
                                        : 0.0;
      rs.rate = fit_run(recs, !ac.perturb.is_none());
      rs.grad_evals = last.grad_evals;
      theorem_checks(*problem, run_spec, ac, seed, recs, rs.rate, summary.checks);
      summary.runs.push_back(std::move(rs));

      if (cfg.emit.count(Emit::kCsv)) {
        const auto path = cfg.outputs / (run_spec.label + "_seed" + std::to_string(seed) + ".csv");
        std::ofstream os = open_output(path);
        csv::write_iterates(os, recs, problem->dimension(), csv_comment(cfg, run_spec, ac, seed));
        close_output(os, path);
      }
    }
  }

  // Ordering by mean iterations among labels that reached tolerance for every seed.
  std::vector<std::pair<double, std::string>> converged;
  std::vector<std::string> rest;
  for (const RunSpec& r : cfg.runs) {
    double total = 0.0;
    std::size_t n = 0;
    bool all = true;
    for (const RunSummary& rs : summary.runs) {
      if (rs.label != r.label) continue;
      all = all && rs.reason == StopReason::kTolerance;
      total += static_cast<double>(rs.iterations);
      ++n;
    }
    if (all && n > 0) {
      converged.emplace_back(total / static_cast<double>(n), r.label);
    } else {
      rest.push_back(r.label);
    }
  }
  std::stable_sort(converged.begin(), converged.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [mean, label] : converged) summary.ordering.push_back(label);
  for (auto& label : rest) summary.ordering.push_back(label);

  if (cfg.emit.count(Emit::kSummary)) {
    const auto path = cfg.outputs / "summary.txt";
    std::ofstream os = open_output(path);
    write_summary(os, summary);
    close_output(os, path);
  }
  if (cfg.emit.count(Emit::kChecks)) {
    const auto path = cfg.outputs / "checks.txt";
    std::ofstream os = open_output(path);
    write_checks(os, summary);
    close_output(os, path);
  }
  return summary;
}

void write_summary(std::ostream& os, const ComparisonSummary& summary) {
  const auto col = [&os](const std::string& text, int width) {
    os << std::left << std::setw(width) << text << ' ';
  };
  os << "experiment " << summary.experiment << '\n';
  os << "oscillation = fraction of direction reversals <x_{k+1}-x_k, x_k-x_{k-1}> < 0\n";
  col("label", 9);
  col("seed", 5);
  col("algo", 6);
  col("iters", 7);
  col("stop", 10);
  col("value_error", 13);
  col("dist", 13);
  col("oscillation", 11);
  col("rate", 18);
  col("r2", 10);
  os << "grad_evals\n";
  for (const RunSummary& r : summary.runs) {
    std::string rate = "-";
    std::string r2 = "-";
    if (r.rate) {
      rate = std::string(to_string(r.rate->kind)) + " " + format_short(r.rate->rate);
      r2 = format_short(r.rate->r_squared);
    }
    col(r.label, 9);
    col(std::to_string(r.seed), 5);
    col(std::string(to_string(r.variant)), 6);
    col(std::to_string(r.iterations), 7);
    col(std::string(to_string(r.reason)), 10);
    col(format_short(r.final_value_error), 13);
    col(r.final_dist ? format_short(*r.final_dist) : std::string("-"), 13);
    col(format_short(r.oscillation), 11);
    col(rate, 18);
    col(r2, 10);
    os << r.grad_evals << '\n';
  }
  os << "ordering:";
  for (const std::string& l : summary.ordering) os << ' ' << l;
  os << '\n';
  for (const std::string& w : summary.warnings) os << "warning: " << w << '\n';
}

void write_checks(std::ostream& os, const ComparisonSummary& summary) {
  for (const CheckResult& c : summary.checks) {
    os << (c.pass ? "PASS" : "FAIL") << "  " << c.label << " seed=" << c.seed << "  " << c.name
       << "  (" << c.detail << ")\n";
  }
  os << (summary.checks_pass() ? "all " : "some ") << summary.checks.size()
     << (summary.checks_pass() ? " checks passed\n" : " checks evaluated, failures present\n");
}

}  // namespace hessdamp
