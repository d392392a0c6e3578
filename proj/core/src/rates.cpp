#include "hessdamp/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hessdamp/analysis.hpp"
#include "hessdamp/error.hpp"
#include "hessdamp/perturbations.hpp"

namespace hessdamp {

std::string_view to_string(RateKind k) {
  return k == RateKind::kExponential ? "exponential" : "power";
}

RateKind parse_rate_kind(std::string_view text) {
  if (text == "exponential" || text == "exp") return RateKind::kExponential;
  if (text == "power" || text == "pow") return RateKind::kPower;
  throw Error(ErrorCode::kParseError, "unknown rate kind '" + std::string(text) + "'");
}

RateFit fit_rate(std::span<const SeriesPoint> series, RateKind kind, double window_fraction,
                 double floor) {
  if (!(window_fraction > 0) || window_fraction > 1) {
    throw Error(ErrorCode::kInvalidArgument, "window_fraction must be in (0, 1]");
  }
  const std::size_t n = series.size();
  const auto start =
      n - std::min(n, static_cast<std::size_t>(std::ceil(window_fraction * static_cast<double>(n))));

  // Centered accumulation keeps the regression well conditioned for large
  // indices.
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = start; i < n; ++i) {
    const auto& pt = series[i];
    if (!(pt.value > floor) || !std::isfinite(pt.value)) continue;
    if (kind == RateKind::kPower && !(pt.index > 0)) continue;
    xs.push_back(kind == RateKind::kPower ? std::log(pt.index) : pt.index);
    ys.push_back(std::log(pt.value));
  }
  if (xs.size() < 10) {
    throw Error(ErrorCode::kInsufficientData,
                "need >= 10 positive values in the fit window, have " +
                    std::to_string(xs.size()));
  }
  const double m = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0)) throw Error(ErrorCode::kInsufficientData, "fit window has a single abscissa");
  const double slope = sxy / sxx;

  RateFit fit;
  fit.kind = kind;
  fit.rate = -slope;
  fit.window = {start, n};
  fit.used = xs.size();
  if (syy > 0) {
    const double ss_res = std::max(0.0, syy - slope * sxy);
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  } else {
    fit.r_squared = 1.0;
  }
  return fit;
}

GeometricSumResult geometric_sum_oracle(double theta, double q, std::int64_t k_max) {
  if (!(theta > 0) || !(theta < 1) || !(q > 0) || k_max < 10) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 < theta < 1, q > 0 and k_max >= 10");
  }
  std::vector<double> scaled(static_cast<std::size_t>(k_max));
  double s = 0.0;
  GeometricSumResult out;
  for (std::int64_t k = 1; k <= k_max; ++k) {
    const double kd = static_cast<double>(k);
    s = theta * s + std::pow(kd, -q);
    scaled[static_cast<std::size_t>(k - 1)] = s * std::pow(kd, q);
    out.max_scaled = std::max(out.max_scaled, scaled[static_cast<std::size_t>(k - 1)]);
  }
  const auto tail = static_cast<std::size_t>(std::max<std::int64_t>(k_max / 10, 2));
  out.bounded = true;
  for (std::size_t i = scaled.size() - tail + 1; i < scaled.size(); ++i) {
    if (scaled[i] > scaled[i - 1] + 1e-9) {
      out.bounded = false;
      break;
    }
  }
  return out;
}

double oscillation_metric(std::span<const Point> iterates) {
  if (iterates.size() < 3) {
    throw Error(ErrorCode::kInsufficientData, "oscillation metric needs >= 3 iterates");
  }
  std::size_t reversals = 0;
  for (std::size_t k = 1; k + 1 < iterates.size(); ++k) {
    const double ip = (iterates[k + 1] - iterates[k]).dot(iterates[k] - iterates[k - 1]);
    if (ip < 0) ++reversals;
  }
  return static_cast<double>(reversals) / static_cast<double>(iterates.size() - 2);
}

double oscillation_metric(std::span<const IterateRecord> records) {
  std::vector<Point> xs;
  xs.reserve(records.size());
  for (const auto& r : records) xs.push_back(r.x);
  return oscillation_metric(std::span<const Point>(xs));
}

namespace {

class BoundTracker {
 public:
  BoundTracker(std::string name, double rel, double abs) : rel_(rel), abs_(abs) {
    check_.name = std::move(name);
    check_.pass = true;
  }

  void observe(std::int64_t k, double lhs, double rhs) {
    ++check_.evaluated;
    const double ratio = rhs > 0 ? lhs / rhs : (lhs > abs_ ? HUGE_VAL : 0.0);
    if (ratio > check_.worst_ratio || check_.evaluated == 1) {
      check_.worst_ratio = ratio;
      check_.worst_k = k;
    }
    if (!(lhs <= rhs * (1.0 + rel_) + abs_)) check_.pass = false;
  }

  BoundCheck result() const { return check_; }

 private:
  BoundCheck check_;
  double rel_;
  double abs_;
};

// Rounding floor of f(x) - f* when f* is nonzero.
double value_abs_slack(const Problem& p) {
  return 4.0 * std::numeric_limits<double>::epsilon() * std::abs(p.require_min_value());
}

std::vector<double> energies(const Problem& p, double c, std::span<const IterateRecord> records) {
  // energies[k] for k >= 1; index 0 unused.
  std::vector<double> e(records.size(), 0.0);
  for (std::size_t k = 1; k < records.size(); ++k) {
    e[k] = discrete_energy(p, c, records[k].x, records[k - 1].x);
  }
  return e;
}

void require_iaa(const AlgorithmConfig& cfg, std::span<const IterateRecord> records) {
  if (cfg.variant != Variant::kIaa) {
    throw Error(ErrorCode::kInvalidArgument, "theorem certificates apply to IAA runs only");
  }
  if (records.size() < 2) throw Error(ErrorCode::kInsufficientData, "need >= 2 iterates");
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].k != static_cast<std::int64_t>(i)) {
      throw Error(ErrorCode::kInvalidArgument, "records must be consecutive from k = 0");
    }
  }
}

}  // namespace

std::vector<BoundCheck> certify_linear_rate(const Problem& p, const AlgorithmConfig& cfg,
                                            std::span<const IterateRecord> records,
                                            double rel_slack) {
  require_iaa(cfg, records);
  if (!cfg.perturb.is_none()) {
    throw Error(ErrorCode::kInvalidArgument, "linear-rate certificate needs an unperturbed run");
  }
  const DerivedConstants dc = rate_constants(p, Theorem::kT41, cfg.alpha, cfg.beta, cfg.s);
  const double rho = *dc.rho;
  const double c = *dc.c;
  const double fs = p.require_min_value();
  const Point& xs = p.require_minimizer();
  const double abs = value_abs_slack(p);
  const std::vector<double> e = energies(p, c, records);
  const double e1 = e[1];

  BoundTracker contraction("T41 energy contraction E_{k+1} <= (1-rho) E_k", rel_slack, abs);
  BoundTracker value("T41 value bound f(x_k)-f* <= E_1 (1-rho)^{k-1}", rel_slack, abs);
  BoundTracker dist("T41 distance bound |x_k-x*|^2 <= 4E_1/gamma (1-rho)^{k-1}", rel_slack, 0.0);
  BoundTracker step("T41 step bound |x_k-x_{k-1}|^2 <= 2 alpha E_1/(L beta) (1-rho)^{k-1}",
                    rel_slack, 0.0);
  for (std::size_t k = 1; k < records.size(); ++k) {
    const auto ki = static_cast<std::int64_t>(k);
    const double decay = std::pow(1.0 - rho, static_cast<double>(k - 1));
    if (k + 1 < records.size()) contraction.observe(ki, e[k + 1], (1.0 - rho) * e[k]);
    value.observe(ki, p.value(records[k].x) - fs, e1 * decay);
    dist.observe(ki, (records[k].x - xs).squaredNorm(), 4.0 * e1 / p.gamma() * decay);
    step.observe(ki, (records[k].x - records[k - 1].x).squaredNorm(),
                 2.0 * cfg.alpha * e1 / (p.lipschitz() * cfg.beta) * decay);
  }
  return {contraction.result(), value.result(), dist.result(), step.result()};
}

BoundCheck certify_perturbed_energy(const Problem& p, const AlgorithmConfig& cfg,
                                    std::span<const IterateRecord> records, double rel_slack) {
  require_iaa(cfg, records);
  const DerivedConstants dc = rate_constants(p, Theorem::kT42, cfg.alpha, cfg.beta, cfg.s);
  const double sigma = *dc.sigma;
  const double n = *dc.n;
  const std::vector<double> e = energies(p, *dc.c, records);
  BoundTracker rec("T42 energy recursion E_{k+1} <= (1-sigma) E_k + N |eps_k|^2", rel_slack,
                   value_abs_slack(p));
  for (std::size_t k = 1; k + 1 < records.size(); ++k) {
    const auto ki = static_cast<std::int64_t>(k);
    const double noise = sample_discrete(cfg.perturb, ki, p.dimension()).squaredNorm();
    rec.observe(ki, e[k + 1], (1.0 - sigma) * e[k] + n * noise);
  }
  return rec.result();
}

std::vector<SeriesPoint> value_error_series(std::span<const IterateRecord> records) {
  std::vector<SeriesPoint> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back({static_cast<double>(r.k), r.value_error});
  return out;
}

std::vector<SeriesPoint> dist_series(std::span<const IterateRecord> records) {
  std::vector<SeriesPoint> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (r.dist) out.push_back({static_cast<double>(r.k), *r.dist});
  }
  return out;
}

}  // namespace hessdamp
