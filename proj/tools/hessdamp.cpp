// hessdamp command line: check, ode, opt, exp, rate.
//
// Exit codes: 0 ok, 1 a check failed, 2 usage or input error, 3 the
// iteration or integration diverged.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>

#include "hessdamp/analysis.hpp"
#include "hessdamp/csv.hpp"
#include "hessdamp/dynamics.hpp"
#include "hessdamp/error.hpp"
#include "hessdamp/experiment.hpp"
#include "hessdamp/optimizers.hpp"
#include "hessdamp/perturbations.hpp"
#include "hessdamp/problems.hpp"
#include "hessdamp/rates.hpp"

namespace fs = std::filesystem;
using namespace hessdamp;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kDiverged = 3;

struct Globals {
  std::uint64_t seed = 0;
  std::string out_dir;
  bool quiet = false;
};

fs::path output_path(const Globals& g, const std::string& file) {
  fs::path p(file);
  if (p.is_relative() && !g.out_dir.empty()) {
    fs::create_directories(g.out_dir);
    p = fs::path(g.out_dir) / p;
  }
  return p;
}

std::ofstream open_csv(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "' for writing");
  return os;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt::format("{:.6g}", *v) : std::string("-");
}

std::string fmt_interval(const Interval& iv) {
  return fmt::format("{}{:.8g}, {:.8g}{}", iv.lo_inclusive ? '[' : '(', iv.lo, iv.hi,
                     iv.hi_inclusive ? ']' : ')');
}

// ---------------------------------------------------------------------------
// check

struct CheckArgs {
  std::string problem;
  std::vector<std::string> box;
  std::int64_t samples = 10000;
  std::optional<std::string> theorem;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> step;
  std::optional<std::string> csv;
};

DomainBox parse_box(const std::vector<std::string>& specs, Index dim) {
  DomainBox box;
  for (const std::string& s : specs) {
    const Point lh = parse_point(s, 2);
    box.emplace_back(lh[0], lh[1]);
  }
  if (box.empty()) box.emplace_back(-1.0, 1.0);
  if (box.size() == 1) box.resize(static_cast<std::size_t>(dim), box.front());
  if (static_cast<Index>(box.size()) != dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("--box given {} times for a {}-dimensional problem", box.size(), dim));
  }
  return box;
}

int cmd_check(const Globals& g, const CheckArgs& a) {
  const Problem p = builtin_problem(a.problem);
  const DomainBox box = parse_box(a.box, p.dimension());
  bool ok = true;

  const auto reports = check_assumptions(p, box, a.samples, g.seed);
  fmt::print("problem {}  gamma={:.6g} L={:.6g} kappa={:.6g}\n", p.name(), p.gamma(),
             p.lipschitz(), p.kappa());
  fmt::print("{:<12}{:>9}{:>12}{:>16}  {}\n", "assumption", "samples", "violations",
             "worst_margin", "result");
  for (const auto& r : reports) {
    fmt::print("{:<12}{:>9}{:>12}{:>16.6g}  {}\n", to_string(r.assumption), r.samples,
               r.violations, r.worst_margin, r.pass ? "pass" : "FAIL");
    ok = ok && r.pass;
  }

  std::vector<Theorem> theorems{Theorem::kT31, Theorem::kT32, Theorem::kT41, Theorem::kT42};
  if (a.theorem) theorems = {parse_theorem(*a.theorem)};
  fmt::print("\n{:<6}{:<28}{:<36}{:>10}{:>12}{:>12}{:>12}{:>12}\n", "box", "alpha", "beta(alpha)",
             "lambda", "c", "rho", "sigma", "N");
  for (const Theorem t : theorems) {
    std::string beta_text = "-";
    DerivedConstants dc;
    ParameterBox pb;
    try {
      pb = parameter_box(p, t, a.alpha, a.step);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInfeasibleAlpha && e.code() != ErrorCode::kEmptyBetaInterval) {
        throw;
      }
      fmt::print("{:<6}{}\n", to_string(t), e.message());
      ok = ok && !(a.theorem && a.beta);
      continue;
    }
    dc = pb.derived;
    if (pb.beta) beta_text = fmt_interval(*pb.beta);
    if (a.alpha && a.beta) {
      if (strictly_inside(p, t, *a.alpha, *a.beta)) {
        dc = rate_constants(p, t, *a.alpha, *a.beta, pb.s);
      } else {
        beta_text += " (beta outside)";
        ok = ok && !a.theorem;
      }
    }
    fmt::print("{:<6}{:<28}{:<36}{:>10}{:>12}{:>12}{:>12}{:>12}\n", to_string(t),
               fmt_interval(pb.alpha), beta_text, fmt_opt(dc.lambda), fmt_opt(dc.c),
               fmt_opt(dc.rho), fmt_opt(dc.sigma), fmt_opt(dc.n));
  }

  if (a.csv) {
    const fs::path path = output_path(g, *a.csv);
    std::ofstream os = open_csv(path);
    os << "assumption,samples,violations,worst_margin,pass\n";
    for (const auto& r : reports) {
      os << to_string(r.assumption) << ',' << r.samples << ',' << r.violations << ','
         << csv::format_real(r.worst_margin) << ',' << (r.pass ? 1 : 0) << '\n';
    }
  }
  return ok ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------
// ode

struct OdeArgs {
  std::string problem;
  double alpha = 0.0;
  double beta = 0.0;
  std::string perturb = "none";
  std::string x0;
  std::string v0 = "0";
  std::optional<double> t0;
  double t_end = 10.0;
  double dt = 1e-3;
  std::int64_t record_every = 1;
  std::optional<std::string> out;
};

int cmd_ode(const Globals& g, const OdeArgs& a) {
  const Problem p = builtin_problem(a.problem);
  const PerturbationSpec pert = parse_perturbation(a.perturb, g.seed);
  IntegrationOptions opt;
  opt.t0 = a.t0.value_or(pert.is_none() ? 0.0 : 1.0);
  opt.t_end = a.t_end;
  opt.dt = a.dt;
  opt.record_every = a.record_every;
  const auto recs = integrate(p, a.alpha, a.beta, pert, parse_point(a.x0, p.dimension()),
                              parse_point(a.v0, p.dimension()), opt);
  if (a.out) {
    const fs::path path = output_path(g, *a.out);
    std::ofstream os = open_csv(path);
    csv::write_trajectory(os, recs, p.dimension(),
                          fmt::format("problem={} alpha={} beta={} perturb={} seed={} dt={}",
                                      p.name(), a.alpha, a.beta, to_string(pert), g.seed, a.dt));
  }
  const auto& last = recs.back();
  if (!g.quiet) {
    fmt::print("t={:.6g} value_error={:.6g} traj_error={:.6g} speed={:.6g} energy={:.6g}\n",
               last.t, last.value_error, last.traj_error, last.speed, last.energy);
  }
  if (pert.is_none() && strictly_inside(p, Theorem::kT31, a.alpha, a.beta)) {
    const double lambda = *rate_constants(p, Theorem::kT31, a.alpha, a.beta, 0.0).lambda;
    const RateCertificate cert = rate_certificate(recs, lambda, p.kappa());
    if (!g.quiet) {
      fmt::print("energy certificate E(t) <= E(t0) exp(-lambda kappa/2 (t-t0)): {} "
                 "(worst slack {:.6g})\n",
                 cert.pass ? "pass" : "FAIL", cert.worst_slack);
    }
    if (!cert.pass) return kCheckFailed;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// opt

struct OptArgs {
  std::string problem;
  std::string algo = "iaa";
  double alpha = 0.0;
  double beta = 0.0;
  double theta = 0.0;
  std::optional<double> step;
  std::string perturb = "none";
  std::string x0;
  std::optional<std::string> x1;
  std::string tol = "1e-10";
  std::int64_t max_iter = 100000;
  std::optional<std::string> out;
};

int cmd_opt(const Globals& g, const OptArgs& a) {
  const Problem p = builtin_problem(a.problem);
  AlgorithmConfig cfg;
  cfg.variant = parse_variant(a.algo);
  cfg.alpha = a.alpha;
  cfg.beta = a.beta;
  cfg.theta = a.theta;
  cfg.s = a.step.value_or(1.0 / p.lipschitz());
  cfg.perturb = parse_perturbation(a.perturb, g.seed);
  StoppingRule stop;
  stop.tol = a.tol == "none" ? std::nullopt : std::optional<double>(std::stod(a.tol));
  stop.max_iter = a.max_iter;
  const Point x0 = parse_point(a.x0, p.dimension());
  const Point x1 = a.x1 ? parse_point(*a.x1, p.dimension()) : x0;
  const RunResult res = run(p, cfg, x0, x1, stop);
  if (a.out) {
    const fs::path path = output_path(g, *a.out);
    std::ofstream os = open_csv(path);
    csv::write_iterates(
        os, res.records, p.dimension(),
        fmt::format("problem={} algo={} alpha={} beta={} theta={} s={} perturb={} seed={}\n"
                    "perturbation enters as +s*eps_k for iaa and +beta*eps_k for the baselines",
                    p.name(), a.algo, cfg.alpha, cfg.beta, cfg.theta, cfg.s, to_string(cfg.perturb),
                    g.seed));
  }
  if (!g.quiet) {
    const auto& last = res.records.back();
    for (const auto& w : res.warnings) fmt::print(std::cerr, "warning: {}\n", w);
    fmt::print("{} stopped on {} at k={}: value_error={:.6g} grad_norm={:.6g} dist={} "
               "grad_evals={}\n",
               a.algo, to_string(res.reason), last.k, last.value_error, last.grad_norm,
               fmt_opt(last.dist), last.grad_evals);
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// exp

struct ExpArgs {
  std::string target;
  std::optional<std::string> seeds;
};

int cmd_exp(const Globals& g, const ExpArgs& a, bool seed_given, bool out_given) {
  const bool from_file = fs::is_regular_file(a.target);
  ExperimentConfig cfg = from_file ? load_experiment_config(a.target) : preset(a.target);
  if (a.seeds) {
    cfg.seeds = parse_seeds(*a.seeds);
  } else if (seed_given) {
    cfg.seeds = {g.seed};
  }
  if (out_given) {
    cfg.outputs = g.out_dir;
  } else if (!from_file || cfg.outputs == ".") {
    cfg.outputs = fs::path(".") / cfg.name;
  }
  const ComparisonSummary summary = execute(cfg);
  if (!g.quiet) {
    write_summary(std::cout, summary);
    write_checks(std::cout, summary);
  }
  return summary.checks_pass() ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------
// rate

struct RateArgs {
  std::string in;
  std::string column = "value_error";
  std::optional<std::string> index_column;
  std::string kind = "exponential";
  double window = 0.5;
  double value_floor = kDefaultValueFloor;
  std::optional<double> min_rate;
};

int cmd_rate(const Globals& g, const RateArgs& a) {
  std::ifstream is(a.in);
  if (!is) throw Error(ErrorCode::kIoError, "cannot open '" + a.in + "'");
  const csv::Table table = csv::read(is);
  if (table.header.empty()) throw Error(ErrorCode::kParseError, "'" + a.in + "' has no header");
  const auto index = table.column(a.index_column.value_or(table.header.front()));
  const auto values = table.column(a.column);
  std::vector<SeriesPoint> series;
  const RateKind kind = parse_rate_kind(a.kind);
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (std::isnan(values[i])) continue;
    if (kind == RateKind::kPower && !(index[i] > 0)) continue;
    series.push_back({index[i], values[i]});
  }
  const RateFit fit = fit_rate(series, kind, a.window, a.value_floor);
  std::string line = fmt::format("{} {}: rate={:.6g} r2={:.6f} window=[{},{}) used={}",
                                 a.column, to_string(fit.kind), fit.rate, fit.r_squared,
                                 fit.window.first, fit.window.second, fit.used);
  bool ok = true;
  if (a.min_rate) {
    ok = fit.rate >= *a.min_rate;
    line += fmt::format(" min_rate={:.6g} {}", *a.min_rate, ok ? "pass" : "FAIL");
  }
  if (!g.quiet) fmt::print("{}\n", line);
  return ok ? kOk : kCheckFailed;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kDivergence:
    case ErrorCode::kNonFiniteIterate:
    case ErrorCode::kNonFiniteState:
      return kDiverged;
    default:
      return kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inertial methods with implicit Hessian damping: checks, simulation, experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Seed for pseudo-random sampling");
  auto* out_opt = app.add_option("--out-dir", g.out_dir, "Directory for output files");
  app.add_flag("--quiet", g.quiet, "Suppress console output");

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "Sample structural assumptions and parameter boxes");
  check->add_option("--problem", ca.problem)->required();
  check->add_option("--box", ca.box, "Per-axis interval lo,hi (one value broadcasts)");
  check->add_option("--samples", ca.samples)->check(CLI::PositiveNumber);
  check->add_option("--theorem", ca.theorem, "T31, T32, T41 or T42 (default all)");
  check->add_option("--alpha", ca.alpha);
  check->add_option("--beta", ca.beta);
  check->add_option("--step", ca.step);
  check->add_option("--csv", ca.csv);

  OdeArgs oa;
  auto* ode = app.add_subcommand("ode", "Integrate the damped inertial system");
  ode->add_option("--problem", oa.problem)->required();
  ode->add_option("--alpha", oa.alpha)->required();
  ode->add_option("--beta", oa.beta)->required();
  ode->add_option("--perturb", oa.perturb);
  ode->add_option("--x0", oa.x0)->required();
  ode->add_option("--v0", oa.v0);
  ode->add_option("--t0", oa.t0, "Default 0, or 1 for perturbed runs");
  ode->add_option("--t-end", oa.t_end);
  ode->add_option("--dt", oa.dt)->check(CLI::PositiveNumber);
  ode->add_option("--record-every", oa.record_every)->check(CLI::PositiveNumber);
  ode->add_option("--out", oa.out, "Trajectory CSV");

  OptArgs pa;
  auto* opt = app.add_subcommand("opt", "Run one optimizer");
  opt->add_option("--problem", pa.problem)->required();
  opt->add_option("--algo", pa.algo)
      ->check(CLI::IsMember({"iaa", "hbm", "nag", "hbm-h", "nag-h"}));
  opt->add_option("--alpha", pa.alpha);
  opt->add_option("--beta", pa.beta);
  opt->add_option("--theta", pa.theta);
  opt->add_option("--step", pa.step, "IAA step size (default 1/L)");
  opt->add_option("--perturb", pa.perturb);
  opt->add_option("--x0", pa.x0)->required();
  opt->add_option("--x1", pa.x1, "Default x0");
  opt->add_option("--tol", pa.tol, "Number or 'none'");
  opt->add_option("--max-iter", pa.max_iter)->check(CLI::PositiveNumber);
  opt->add_option("--out", pa.out, "Iterate CSV");

  ExpArgs ea;
  auto* exp = app.add_subcommand("exp", "Run a preset (fig12, fig34, fig45) or a config file");
  exp->add_option("target", ea.target)->required();
  exp->add_option("--seeds", ea.seeds, "e.g. 1..10 or 1,4,7");

  RateArgs ra;
  auto* rate = app.add_subcommand("rate", "Fit a convergence rate to a CSV column");
  rate->add_option("--in", ra.in)->required();
  rate->add_option("--column", ra.column);
  rate->add_option("--index-column", ra.index_column, "Default: first column");
  rate->add_option("--kind", ra.kind)->check(CLI::IsMember({"exponential", "exp", "power", "pow"}));
  rate->add_option("--window", ra.window);
  rate->add_option("--value-floor", ra.value_floor);
  rate->add_option("--min-rate", ra.min_rate, "Exit 1 when the fitted rate is lower");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*check) return cmd_check(g, ca);
    if (*ode) return cmd_ode(g, oa);
    if (*opt) return cmd_opt(g, pa);
    if (*exp) return cmd_exp(g, ea, seed_opt->count() > 0, out_opt->count() > 0);
    if (*rate) return cmd_rate(g, ra);
  } catch (const Error& e) {
    fmt::print(std::cerr, "hessdamp: {}\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "hessdamp: {}\n", e.what());
    return kUsage;
  }
  return kUsage;
}
