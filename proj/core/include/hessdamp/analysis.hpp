#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hessdamp/point.hpp"
#include "hessdamp/problems.hpp"

namespace hessdamp {

/// T31/T32: continuous system without/with perturbation.
/// T41/T42: IAA without/with perturbation (s = 1/L).
enum class Theorem { kT31, kT32, kT41, kT42 };

std::string_view to_string(Theorem t);
Theorem parse_theorem(std::string_view text);

/// Real interval with explicit endpoint semantics.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_inclusive = false;
  bool hi_inclusive = false;

  bool contains(double v) const;
  bool empty() const;
};

struct DerivedConstants {
  std::optional<double> lambda;  // 2 alpha / (kappa + 4)
  std::optional<double> c;       // beta / (alpha s)
  std::optional<double> rho;
  std::optional<double> sigma;
  std::optional<double> n;  // noise amplification N
};

struct ParameterBox {
  Theorem theorem = Theorem::kT31;
  Interval alpha;
  /// Admissible beta as a function of alpha (empty interval outside alpha).
  std::function<Interval(double)> beta_interval_of_alpha;
  std::optional<double> alpha_at;
  std::optional<Interval> beta;  // populated when alpha_at is
  double s = 0.0;                // step size the discrete theorems assume
  DerivedConstants derived;
};

/// Admissible (alpha, beta) region of a theorem.
/// Throws kInfeasibleAlpha if `alpha` is outside the alpha interval and
/// kEmptyBetaInterval if the beta bounds cross at that alpha.
ParameterBox parameter_box(const Problem& p, Theorem theorem,
                           std::optional<double> alpha = std::nullopt,
                           std::optional<double> s = std::nullopt);

/// True when (alpha, beta) is strictly inside the box (open in beta at both
/// ends, respecting the alpha interval semantics).
bool strictly_inside(const Problem& p, Theorem theorem, double alpha, double beta);

/// Theorem constants at an admissible point. T31/T32 give lambda; T41 gives
/// c and rho; T42 gives c, sigma and N. Throws kOutOfBox.
DerivedConstants rate_constants(const Problem& p, Theorem theorem, double alpha, double beta,
                                double s);

enum class Assumption { kSqc, kPl, kA1, kQuadGrowth };
std::string_view to_string(Assumption a);

struct AssumptionReport {
  Assumption assumption = Assumption::kSqc;
  std::int64_t samples = 0;
  std::int64_t violations = 0;
  double worst_margin = 0.0;  // smallest slack observed
  bool pass = false;
};

using DomainBox = std::vector<std::pair<double, double>>;

/// Samples the structural inequalities at pseudo-random points of `box`:
///   SQC        f(x) <= f(y) => <grad f(y), x - y> <= -gamma/2 |y - x|^2   (pairs)
///   PL         |grad f(x)|^2 >= gamma^2/(2L) (f(x) - f*)
///   A1         <grad f(x), x - x*> >= kappa (f(x) - f*)
///   QuadGrowth f(x) >= f* + gamma/4 |x - x*|^2
/// A sample violates when its slack is below -1e-9. Deterministic in `seed`.
std::vector<AssumptionReport> check_assumptions(const Problem& p, const DomainBox& box,
                                                std::int64_t samples, std::uint64_t seed);

/// E = f(x + beta v) - f* + 1/2 |lambda (x - x*) + v|^2 + lambda^2/2 |x - x*|^2
/// with lambda = 2 alpha / (kappa + 4).
double continuous_energy(const Problem& p, double alpha, double beta, const Point& x,
                         const Point& v);

/// E_k = f(x_k) - f* + c/2 |x_k - x_{k-1}|^2.
double discrete_energy(const Problem& p, double c, const Point& x_k, const Point& x_km1);

}  // namespace hessdamp
