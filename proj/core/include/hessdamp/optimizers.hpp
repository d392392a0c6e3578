#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hessdamp/perturbations.hpp"
#include "hessdamp/point.hpp"
#include "hessdamp/problems.hpp"

namespace hessdamp {

enum class Variant { kIaa, kHbm, kNag, kHbmH, kNagH };

std::string_view to_string(Variant v);
/// Accepts the CLI names iaa, hbm, nag, hbm-h, nag-h.
Variant parse_variant(std::string_view text);

/// Coefficients of one method.
///
///   IAA    y = x_k + alpha d_k, z = x_k + beta d_k, x_{k+1} = y - s grad f(z) + s eps_k
///   HBM    x_{k+1} = x_k + alpha d_k - beta grad f(x_k) + beta eps_k
///   NAG    y = x_k + alpha d_k, x_{k+1} = y - beta grad f(y) + beta eps_k
///   HBM-H  y = x_k + alpha d_k - theta (g_k - g_{k-1}), x_{k+1} = y - beta g_k + beta eps_k
///   NAG-H  same y, x_{k+1} = y - beta grad f(y) + beta eps_k
///
/// with d_k = x_k - x_{k-1} and g_k = grad f(x_k).
struct AlgorithmConfig {
  Variant variant = Variant::kIaa;
  double alpha = 0.0;
  double beta = 0.0;
  double theta = 0.0;
  double s = 0.0;
  PerturbationSpec perturb;
};

struct IterateRecord {
  std::int64_t k = 0;
  Point x;
  double value_error = 0.0;  // f(x_k) - f* when f* is known, else f(x_k)
  double grad_norm = 0.0;
  std::optional<double> dist;    // |x_k - x*|
  double step = 0.0;             // |x_k - x_{k-1}|, 0 at k = 0
  std::optional<double> energy;  // IAA only, c = beta / (alpha s)
  std::int64_t grad_evals = 0;   // cumulative algorithmic gradient evaluations
};

struct StoppingRule {
  /// On value_error if f* is known, else on grad_norm. Unset means the run
  /// stops on max_iter only.
  std::optional<double> tol = 1e-10;
  std::int64_t max_iter = 100000;
};

enum class StopReason { kTolerance, kMaxIter };
std::string_view to_string(StopReason r);

struct RunResult {
  std::vector<IterateRecord> records;
  StopReason reason = StopReason::kMaxIter;
  std::vector<std::string> warnings;
};

/// One IAA / IAA-Per update. Throws kNonFiniteIterate.
Point step_iaa(const Problem& p, const AlgorithmConfig& cfg, const Point& x_k, const Point& x_km1,
               const Point& eps_k);

struct BaselineStep {
  Point x_next;
  Point g_k;  // grad f(x_k), cached for the next Hessian-correction difference
};

/// One baseline update. `g_km1` = grad f(x_{k-1}) is required for HBM-H and
/// NAG-H (throws kMissingGradientCache otherwise). `grad_evals`, if given, is
/// incremented by the number of gradient evaluations performed.
BaselineStep step_baseline(const Problem& p, const AlgorithmConfig& cfg, const Point& x_k,
                           const Point& x_km1, const std::optional<Point>& g_km1,
                           const Point& eps_k, std::int64_t* grad_evals = nullptr);

/// Iterates from (x0, x1) and records every iterate, k = 0, 1, ..., until the
/// stopping rule fires (checked from k = 1) or k reaches max_iter. IAA
/// parameters outside the relevant theorem box produce a warning, not an
/// error. Throws kNonFiniteIterate or kDivergence (|x| > 1e12).
RunResult run(const Problem& p, const AlgorithmConfig& cfg, const Point& x0, const Point& x1,
              const StoppingRule& stop);

}  // namespace hessdamp
