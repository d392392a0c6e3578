#include "hessdamp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hessdamp/error.hpp"
#include "hessdamp/perturbations.hpp"

namespace hessdamp {

namespace {

constexpr double kSlackTol = -1e-9;

Interval closed(double lo, double hi) { return {lo, hi, true, true}; }
Interval open(double lo, double hi) { return {lo, hi, false, false}; }

double sqr(double v) { return v * v; }

// Upper beta bound of the unperturbed continuous theorem.
double t31_beta_hi(double alpha, double gamma, double kappa) {
  const double k2 = std::pow(kappa + 2.0, 2);
  const double k4 = std::pow(kappa + 4.0, 3);
  return (std::sqrt(sqr(alpha) * k2 * k2 + 16.0 * gamma * k4) - alpha * k2) /
         (4.0 * gamma * (kappa + 4.0));
}

double t32_beta_hi(double alpha, double gamma, double kappa) {
  const double k2 = std::pow(kappa + 2.0, 2);
  const double k4 = std::pow(kappa + 4.0, 3);
  return (std::sqrt(2.0 * sqr(alpha) * k2 * k2 + 27.0 * gamma * k4) -
          std::sqrt(2.0) * alpha * k2) /
         (9.0 * std::sqrt(2.0) * gamma * (kappa + 4.0));
}

Interval alpha_interval(const Problem& p, Theorem t) {
  const double g = p.gamma();
  const double k = p.kappa();
  switch (t) {
    case Theorem::kT31: return {0.0, (k + 4.0) / 4.0 * std::sqrt(g / k), false, true};
    case Theorem::kT32: return {0.0, (k + 4.0) / 4.0 * std::sqrt(g / (2.0 * k)), false, true};
    case Theorem::kT41:
    case Theorem::kT42: return open(0.0, 0.5);
  }
  return {};
}

// Empty interval when the discriminant is nonpositive or the bounds cross.
Interval beta_interval(const Problem& p, Theorem t, double alpha) {
  const double g = p.gamma();
  const double k = p.kappa();
  switch (t) {
    case Theorem::kT31: return closed(0.0, t31_beta_hi(alpha, g, k));
    case Theorem::kT32: return closed(0.0, t32_beta_hi(alpha, g, k));
    case Theorem::kT41: {
      const double disc = -15.0 * std::pow(alpha, 4) + 2.0 * sqr(alpha) + 1.0;
      if (!(disc > 0)) return open(0.0, 0.0);
      const double r = std::sqrt(disc);
      return open((1.0 + sqr(alpha) - r) / (8.0 * alpha),
                  std::min(alpha, (1.0 + sqr(alpha) + r) / (8.0 * alpha)));
    }
    case Theorem::kT42: {
      const double disc = 1.0 - 16.0 * std::pow(alpha, 4);
      if (!(disc > 0)) return open(0.0, 0.0);
      const double r = std::sqrt(disc);
      return open((1.0 - r) / (8.0 * alpha), std::min(alpha / 2.0, (1.0 + r) / (8.0 * alpha)));
    }
  }
  return {};
}

bool is_discrete(Theorem t) { return t == Theorem::kT41 || t == Theorem::kT42; }

}  // namespace

std::string_view to_string(Theorem t) {
  switch (t) {
    case Theorem::kT31: return "T31";
    case Theorem::kT32: return "T32";
    case Theorem::kT41: return "T41";
    case Theorem::kT42: return "T42";
  }
  return "?";
}

Theorem parse_theorem(std::string_view text) {
  if (text == "T31" || text == "t31") return Theorem::kT31;
  if (text == "T32" || text == "t32") return Theorem::kT32;
  if (text == "T41" || text == "t41") return Theorem::kT41;
  if (text == "T42" || text == "t42") return Theorem::kT42;
  throw Error(ErrorCode::kParseError, "unknown theorem tag '" + std::string(text) + "'");
}

bool Interval::contains(double v) const {
  const bool above = lo_inclusive ? v >= lo : v > lo;
  const bool below = hi_inclusive ? v <= hi : v < hi;
  return above && below;
}

bool Interval::empty() const {
  if (lo < hi) return false;
  return !(lo == hi && lo_inclusive && hi_inclusive);
}

ParameterBox parameter_box(const Problem& p, Theorem theorem, std::optional<double> alpha,
                           std::optional<double> s) {
  ParameterBox box;
  box.theorem = theorem;
  box.alpha = alpha_interval(p, theorem);
  box.s = s.value_or(1.0 / p.lipschitz());
  const Interval a_int = box.alpha;
  box.beta_interval_of_alpha = [p, theorem, a_int](double a) {
    if (!a_int.contains(a)) return open(0.0, 0.0);
    return beta_interval(p, theorem, a);
  };
  if (alpha) {
    if (!(*alpha > 0)) throw Error(ErrorCode::kInfeasibleAlpha, "alpha must be positive");
    if (!box.alpha.contains(*alpha)) {
      throw Error(ErrorCode::kInfeasibleAlpha,
                  "alpha = " + std::to_string(*alpha) + " outside the " +
                      std::string(to_string(theorem)) + " interval");
    }
    box.alpha_at = alpha;
    box.beta = beta_interval(p, theorem, *alpha);
    if (box.beta->empty()) {
      throw Error(ErrorCode::kEmptyBetaInterval,
                  "beta bounds cross at alpha = " + std::to_string(*alpha));
    }
    if (!is_discrete(theorem)) box.derived.lambda = 2.0 * *alpha / (p.kappa() + 4.0);
  }
  return box;
}

bool strictly_inside(const Problem& p, Theorem theorem, double alpha, double beta) {
  const Interval a = alpha_interval(p, theorem);
  if (!a.contains(alpha)) return false;
  const Interval b = beta_interval(p, theorem, alpha);
  if (b.empty()) return false;
  return beta > b.lo && beta < b.hi;
}

DerivedConstants rate_constants(const Problem& p, Theorem theorem, double alpha, double beta,
                                double s) {
  if (!strictly_inside(p, theorem, alpha, beta)) {
    throw Error(ErrorCode::kOutOfBox, "(alpha, beta) = (" + std::to_string(alpha) + ", " +
                                          std::to_string(beta) + ") not strictly inside the " +
                                          std::string(to_string(theorem)) + " box");
  }
  DerivedConstants out;
  const double L = p.lipschitz();
  const double g = p.gamma();
  if (!is_discrete(theorem)) {
    out.lambda = 2.0 * alpha / (p.kappa() + 4.0);
    return out;
  }
  if (!(s > 0) || std::abs(s * L - 1.0) > 1e-12) {
    throw Error(ErrorCode::kOutOfBox, "discrete theorems require s = 1/L");
  }
  out.c = beta / (alpha * s);
  // Both theorems share the denominators of the energy upper bound.
  const double grad_den = 2.0 * L / sqr(g) + beta / 2.0;
  const double step_den = beta / 2.0 * (1.0 + L * beta + L / alpha);
  if (theorem == Theorem::kT41) {
    const double a = (1.0 / (2.0 * L)) * (1.0 - beta / alpha) / grad_den;
    const double b =
        (L / (2.0 * alpha)) * ((sqr(alpha) + 1.0) * beta - 4.0 * alpha * sqr(beta) -
                               std::pow(alpha, 3)) /
        step_den;
    out.rho = std::min(a, b);
  } else {
    const double a = (1.0 / L) * (0.5 - beta / alpha) / grad_den;
    const double b =
        (L / (2.0 * alpha)) * (beta - 4.0 * alpha * sqr(beta) - std::pow(alpha, 3)) / step_den;
    out.sigma = std::min(a, b);
    out.n = (1.0 / L) * (0.5 + beta / alpha + alpha / (2.0 * beta));
  }
  return out;
}

std::string_view to_string(Assumption a) {
  switch (a) {
    case Assumption::kSqc: return "SQC";
    case Assumption::kPl: return "PL";
    case Assumption::kA1: return "A1";
    case Assumption::kQuadGrowth: return "QuadGrowth";
  }
  return "?";
}

std::vector<AssumptionReport> check_assumptions(const Problem& p, const DomainBox& box,
                                                std::int64_t samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::kInvalidArgument, "samples must be >= 1");
  if (static_cast<Index>(box.size()) != p.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "domain box needs one interval per coordinate");
  }
  for (const auto& [lo, hi] : box) {
    if (!(lo <= hi)) throw Error(ErrorCode::kInvalidArgument, "domain box interval lo > hi");
  }
  const Point& xs = p.require_minimizer();
  const double fs = p.require_min_value();
  const double g = p.gamma();
  const double L = p.lipschitz();
  const double k = p.kappa();
  const Index d = p.dimension();

  // Stream 0 draws x, stream 1 draws the SQC partner y.
  auto draw = [&](std::int64_t i, std::uint64_t stream) {
    Point x(d);
    for (Index j = 0; j < d; ++j) {
      const auto& [lo, hi] = box[static_cast<std::size_t>(j)];
      x[j] = lo + (hi - lo) * counter_rng::uniform(seed, static_cast<std::uint64_t>(i),
                                                   static_cast<std::uint64_t>(j), stream);
    }
    return x;
  };

  std::vector<AssumptionReport> reports;
  for (Assumption a : {Assumption::kSqc, Assumption::kPl, Assumption::kA1,
                       Assumption::kQuadGrowth}) {
    AssumptionReport r;
    r.assumption = a;
    r.samples = samples;
    r.worst_margin = std::numeric_limits<double>::infinity();
    reports.push_back(r);
  }
  auto record = [](AssumptionReport& r, double slack) {
    r.worst_margin = std::min(r.worst_margin, slack);
    if (slack < kSlackTol) ++r.violations;
  };

  for (std::int64_t i = 0; i < samples; ++i) {
    const Point x = draw(i, 0);
    const double fx = p.value(x);
    const Point gx = p.gradient(x);
    const double gap = fx - fs;
    const Point dx = x - xs;

    {
      const Point y = draw(i, 1);
      const double fy = p.value(y);
      // Orient the pair so that f(lower) <= f(upper).
      const bool x_lower = fx <= fy;
      const Point& lower = x_lower ? x : y;
      const Point& upper = x_lower ? y : x;
      const Point g_upper = x_lower ? p.gradient(y) : gx;
      const Point diff = lower - upper;
      record(reports[0], -0.5 * g * diff.squaredNorm() - g_upper.dot(diff));
    }
    record(reports[1], gx.squaredNorm() - sqr(g) / (2.0 * L) * gap);
    record(reports[2], gx.dot(dx) - k * gap);
    record(reports[3], gap - g / 4.0 * dx.squaredNorm());
  }
  for (auto& r : reports) r.pass = r.violations == 0;
  return reports;
}

double continuous_energy(const Problem& p, double alpha, double beta, const Point& x,
                         const Point& v) {
  const Point& xs = p.require_minimizer();
  const double fs = p.require_min_value();
  const double lambda = 2.0 * alpha / (p.kappa() + 4.0);
  const Point dx = x - xs;
  const Point w = lambda * dx + v;
  return p.value(x + beta * v) - fs + 0.5 * w.squaredNorm() + 0.5 * sqr(lambda) * dx.squaredNorm();
}

double discrete_energy(const Problem& p, double c, const Point& x_k, const Point& x_km1) {
  if (!(c > 0)) throw Error(ErrorCode::kInvalidArgument, "energy weight c must be positive");
  const double fs = p.require_min_value();
  return p.value(x_k) - fs + 0.5 * c * (x_k - x_km1).squaredNorm();
}

}  // namespace hessdamp
