#include "hessdamp/problems.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "hessdamp/error.hpp"

namespace hessdamp {

namespace {

constexpr double kStationarityTol = 1e-10;

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double parse_double(std::string_view text, std::string_view context) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw Error(ErrorCode::kUnknownProblem,
                "cannot parse number '" + t + "' in " + std::string(context));
  }
  return v;
}

// quadratic(d, [l1, l2, ...])
Problem parse_quadratic(std::string_view name) {
  const std::string full(name);
  const auto open = name.find('(');
  const auto close = name.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open ||
      trim(name.substr(close + 1)) != "") {
    throw Error(ErrorCode::kUnknownProblem, "malformed quadratic spec '" + full + "'");
  }
  const std::string_view args = name.substr(open + 1, close - open - 1);
  const auto comma = args.find(',');
  const auto lb = args.find('[');
  const auto rb = args.rfind(']');
  if (comma == std::string_view::npos || lb == std::string_view::npos ||
      rb == std::string_view::npos || comma > lb || rb < lb) {
    throw Error(ErrorCode::kUnknownProblem, "quadratic spec must look like quadratic(d, [l1, ...])");
  }
  const double d = parse_double(args.substr(0, comma), full);
  std::vector<double> spectrum;
  std::string_view list = args.substr(lb + 1, rb - lb - 1);
  while (!list.empty()) {
    const auto c = list.find(',');
    spectrum.push_back(parse_double(list.substr(0, c), full));
    if (c == std::string_view::npos) break;
    list.remove_prefix(c + 1);
  }
  if (d < 1 || std::floor(d) != d || static_cast<std::size_t>(d) != spectrum.size()) {
    throw Error(ErrorCode::kUnknownProblem,
                "quadratic dimension does not match spectrum length in '" + full + "'");
  }
  return quadratic(spectrum);
}

}  // namespace

Problem::Problem(ProblemSpec spec)
    : name_(std::move(spec.name)),
      dimension_(spec.dimension),
      value_(std::move(spec.value)),
      gradient_(std::move(spec.gradient)),
      gamma_(spec.gamma),
      lipschitz_(spec.lipschitz),
      kappa_(spec.kappa.value_or(spec.lipschitz > 0 ? spec.gamma / spec.lipschitz : 0.0)),
      minimizer_(std::move(spec.minimizer)),
      min_value_(spec.min_value) {
  if (dimension_ < 1) throw Error(ErrorCode::kInvalidArgument, "dimension must be positive");
  if (!value_ || !gradient_) throw Error(ErrorCode::kInvalidArgument, "value and gradient required");
  if (!(gamma_ > 0) || !(lipschitz_ > 0) || !(kappa_ > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "gamma, lipschitz and kappa must be positive");
  }
  if (minimizer_) {
    if (minimizer_->size() != dimension_) {
      throw Error(ErrorCode::kDimensionMismatch, "minimizer has wrong dimension");
    }
    const double g = gradient_(*minimizer_).norm();
    if (!(g <= kStationarityTol)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "declared minimizer is not stationary (|grad| = " + std::to_string(g) + ")");
    }
  }
}

const Point& Problem::require_minimizer() const {
  if (!minimizer_) throw Error(ErrorCode::kMissingMinimizer, name_ + " has no known minimizer");
  return *minimizer_;
}

double Problem::require_min_value() const {
  if (!min_value_) throw Error(ErrorCode::kMissingMinimizer, name_ + " has no known optimal value");
  return *min_value_;
}

std::pair<double, Point> eval_pair(const Problem& p, const Point& x) {
  if (x.size() != p.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "point has dimension " + std::to_string(x.size()) +
                                                   ", problem expects " +
                                                   std::to_string(p.dimension()));
  }
  if (!all_finite(x)) throw Error(ErrorCode::kNonFiniteInput, "point contains NaN or Inf");
  return {p.value(x), p.gradient(x)};
}

Problem example51() {
  ProblemSpec spec;
  spec.name = "example51";
  spec.dimension = 1;
  spec.value = [](const Point& x) {
    const double s = std::sin(x[0]);
    return x[0] * x[0] + 2.0 * s * s;
  };
  spec.gradient = [](const Point& x) {
    Point g(1);
    g[0] = 2.0 * x[0] + 2.0 * std::sin(2.0 * x[0]);
    return g;
  };
  spec.gamma = 0.5;
  spec.lipschitz = 6.0;
  spec.minimizer = Point::Zero(1);
  spec.min_value = 0.0;
  return Problem(std::move(spec));
}

Problem example52() {
  ProblemSpec spec;
  spec.name = "example52";
  spec.dimension = 2;
  spec.value = [](const Point& p) {
    const double x = p[0];
    const double y = p[1];
    const double u = x * x + 2.0 * y * y + 0.2;
    return x * x / 10.0 + y * y / 5.0 - std::atan(1.0 / u);
  };
  // d/du [-arctan(1/u)] = 1 / (1 + u^2)
  spec.gradient = [](const Point& p) {
    const double x = p[0];
    const double y = p[1];
    const double u = x * x + 2.0 * y * y + 0.2;
    const double w = 1.0 / (1.0 + u * u);
    Point g(2);
    g[0] = x / 5.0 + 2.0 * x * w;
    g[1] = 2.0 * y / 5.0 + 4.0 * y * w;
    return g;
  };
  spec.gamma = 0.2;
  spec.lipschitz = 8.0;
  spec.minimizer = Point::Zero(2);
  spec.min_value = -std::atan(5.0);
  return Problem(std::move(spec));
}

Problem quadratic(const std::vector<double>& spectrum) {
  if (spectrum.empty()) throw Error(ErrorCode::kInvalidArgument, "empty spectrum");
  for (double l : spectrum) {
    if (!(l > 0) || !std::isfinite(l)) {
      throw Error(ErrorCode::kInvalidArgument, "quadratic eigenvalues must be positive and finite");
    }
  }
  const Index d = static_cast<Index>(spectrum.size());
  Point diag(d);
  for (Index i = 0; i < d; ++i) diag[i] = spectrum[static_cast<std::size_t>(i)];

  std::string name = "quadratic(" + std::to_string(d) + ",[";
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, spectrum[i]);
    name += (i ? "," : "") + std::string(buf, r.ptr);
  }
  name += "])";

  ProblemSpec spec;
  spec.name = std::move(name);
  spec.dimension = d;
  spec.value = [diag](const Point& x) { return 0.5 * x.dot(diag.cwiseProduct(x)); };
  spec.gradient = [diag](const Point& x) -> Point { return diag.cwiseProduct(x); };
  spec.gamma = diag.minCoeff();
  spec.lipschitz = diag.maxCoeff();
  spec.minimizer = Point::Zero(d);
  spec.min_value = 0.0;
  return Problem(std::move(spec));
}

Problem builtin_problem(std::string_view name) {
  const std::string n = trim(name);
  if (n == "example51") return example51();
  if (n == "example52") return example52();
  if (n.rfind("quadratic", 0) == 0) return parse_quadratic(n);
  throw Error(ErrorCode::kUnknownProblem, "unknown problem '" + n + "'");
}

}  // namespace hessdamp
