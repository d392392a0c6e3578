#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hessdamp/point.hpp"

namespace hessdamp {

using ValueFn = std::function<double(const Point&)>;
using GradientFn = std::function<Point(const Point&)>;

/// Caller-asserted description of a differentiable objective. `gamma` is the
/// strong-quasiconvexity modulus, `lipschitz` the gradient Lipschitz constant
/// and `kappa` the constant in <grad f(x), x - x*> >= kappa (f(x) - f*).
/// When `kappa` is omitted it defaults to gamma / lipschitz.
struct ProblemSpec {
  std::string name;
  Index dimension = 0;
  ValueFn value;
  GradientFn gradient;
  double gamma = 0.0;
  double lipschitz = 0.0;
  std::optional<double> kappa;
  std::optional<Point> minimizer;
  std::optional<double> min_value;
};

/// Immutable objective plus metadata. Evaluation is pure, so a Problem can be
/// shared between concurrent runs.
class Problem {
 public:
  /// Validates the metadata. Throws Error(kInvalidArgument) on nonpositive
  /// constants or a non-stationary minimizer (|grad| > 1e-10).
  explicit Problem(ProblemSpec spec);

  const std::string& name() const { return name_; }
  Index dimension() const { return dimension_; }
  double gamma() const { return gamma_; }
  double lipschitz() const { return lipschitz_; }
  double kappa() const { return kappa_; }
  const std::optional<Point>& minimizer() const { return minimizer_; }
  const std::optional<double>& min_value() const { return min_value_; }

  /// Raw evaluations without input validation; hot loops use these.
  double value(const Point& x) const { return value_(x); }
  Point gradient(const Point& x) const { return gradient_(x); }

  /// Throws kMissingMinimizer unless both x* and f(x*) are known.
  const Point& require_minimizer() const;
  double require_min_value() const;

 private:
  std::string name_;
  Index dimension_;
  ValueFn value_;
  GradientFn gradient_;
  double gamma_;
  double lipschitz_;
  double kappa_;
  std::optional<Point> minimizer_;
  std::optional<double> min_value_;
};

/// Checked evaluation: (f(x), grad f(x)).
/// Throws kDimensionMismatch or kNonFiniteInput.
std::pair<double, Point> eval_pair(const Problem& p, const Point& x);

/// f(x) = x^2 + 2 sin^2 x on R; gamma = 1/2, L = 6, x* = 0, f* = 0.
Problem example51();

/// f(x, y) = x^2/10 + y^2/5 - arctan(1 / (x^2 + 2 y^2 + 0.2)); gamma = 0.2,
/// x* = (0, 0), f* = -arctan 5. L = 8 so that s = 0.125 equals 1/L.
Problem example52();

/// f(x) = 1/2 sum_i lambda_i x_i^2 with gamma = min lambda, L = max lambda.
Problem quadratic(const std::vector<double>& spectrum);

/// Resolves "example51", "example52" or "quadratic(d, [l1, ..., ld])".
/// Throws kUnknownProblem for anything else.
Problem builtin_problem(std::string_view name);

}  // namespace hessdamp
