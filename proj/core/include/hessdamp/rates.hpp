#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hessdamp/optimizers.hpp"
#include "hessdamp/point.hpp"
#include "hessdamp/problems.hpp"

namespace hessdamp {

enum class RateKind { kExponential, kPower };

std::string_view to_string(RateKind k);
RateKind parse_rate_kind(std::string_view text);

struct SeriesPoint {
  double index = 0.0;
  double value = 0.0;
};

/// Least-squares fit of a decay rate.
///   exponential: ln v = a - rate * index   (for (1 - rho)^k, rho = 1 - e^{-rate})
///   power:       ln v = a - rate * ln index
struct RateFit {
  RateKind kind = RateKind::kExponential;
  double rate = 0.0;
  double r_squared = 0.0;
  std::pair<std::size_t, std::size_t> window;  // [start, end) into the input series
  std::size_t used = 0;                        // points above the floor
};

inline constexpr double kDefaultValueFloor = 1e-15;

/// Fits the last `window_fraction` of `series`, ignoring values <= `floor`.
/// Throws kInsufficientData with fewer than 10 usable points.
RateFit fit_rate(std::span<const SeriesPoint> series, RateKind kind,
                 double window_fraction = 0.5, double floor = kDefaultValueFloor);

struct GeometricSumResult {
  double max_scaled = 0.0;  // max_k S_k k^q
  bool bounded = false;
};

/// S_k = sum_{i=1..k} theta^{k-i} i^{-q} for k = 1..k_max. `bounded` holds when
/// S_k k^q is nonincreasing (1e-9 slack) over the final 10% of indices.
GeometricSumResult geometric_sum_oracle(double theta, double q, std::int64_t k_max);

/// Fraction of consecutive step pairs that reverse direction, i.e.
/// <x_{k+1} - x_k, x_k - x_{k-1}> < 0, over the n - 2 available pairs.
/// Throws kInsufficientData with fewer than 3 iterates.
double oscillation_metric(std::span<const Point> iterates);
double oscillation_metric(std::span<const IterateRecord> records);

/// One certified inequality evaluated along a run. `worst_ratio` is the
/// largest lhs / rhs seen; the check passes when lhs <= rhs (1 + rel_slack)
/// + abs_slack at every index.
struct BoundCheck {
  std::string name;
  bool pass = false;
  double worst_ratio = 0.0;
  std::int64_t worst_k = 0;
  std::int64_t evaluated = 0;
};

/// Linear-rate certificate for unperturbed IAA with s = 1/L and (alpha, beta)
/// strictly inside the T41 box, with E_k = f(x_k) - f* + c/2 |x_k - x_{k-1}|^2:
///   E_{k+1} <= (1 - rho) E_k
///   f(x_k) - f* <= E_1 (1 - rho)^{k-1}
///   |x_k - x*|^2 <= 4 E_1 / gamma (1 - rho)^{k-1}
///   |x_k - x_{k-1}|^2 <= 2 alpha E_1 / (L beta) (1 - rho)^{k-1}
/// Throws kOutOfBox when the configuration is outside the box.
std::vector<BoundCheck> certify_linear_rate(const Problem& p, const AlgorithmConfig& cfg,
                                            std::span<const IterateRecord> records,
                                            double rel_slack = 1e-9);

/// Energy recursion for perturbed IAA inside the T42 box:
///   E_{k+1} <= (1 - sigma) E_k + N |eps_k|^2
/// with eps_k re-sampled from cfg.perturb. Throws kOutOfBox.
BoundCheck certify_perturbed_energy(const Problem& p, const AlgorithmConfig& cfg,
                                    std::span<const IterateRecord> records,
                                    double rel_slack = 1e-9);

/// Convenience: (k, field) series from iterate records.
std::vector<SeriesPoint> value_error_series(std::span<const IterateRecord> records);
std::vector<SeriesPoint> dist_series(std::span<const IterateRecord> records);

}  // namespace hessdamp
