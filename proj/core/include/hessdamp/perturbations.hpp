#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "hessdamp/point.hpp"

namespace hessdamp {

enum class PerturbationModel { kNone, kPowerDecay, kGaussianDecay };

/// Additive perturbation model shared by the ODE integrator and the discrete
/// methods.
///
///   none            eps == 0
///   power_decay     eps_k = c0 / k^p * d   (continuous: c0 / t^p * d)
///   gaussian_decay  eps_k ~ N(0, sigma_k^2 I), sigma_k = sigma0 / (1 + decay k)
///
/// `d` is the unit axis vector e_{axis} when `axis` is set, otherwise a unit
/// direction drawn once from `seed`.
struct PerturbationSpec {
  PerturbationModel model = PerturbationModel::kNone;
  double c0 = 0.0;
  double p = 1.0;
  double sigma0 = 0.0;
  double decay = 0.0;
  std::uint64_t seed = 0;
  std::optional<Index> axis;

  static PerturbationSpec none() { return {}; }
  static PerturbationSpec power_decay(double c0, double p, std::optional<Index> axis,
                                      std::uint64_t seed = 0);
  static PerturbationSpec gaussian_decay(double sigma0, double decay, std::uint64_t seed);

  bool is_none() const { return model == PerturbationModel::kNone; }
};

/// Parses the CLI mini-grammar:
///   none
///   power:c0=<r>,p=<r>[,dir=e<i>|dir=random]
///   gauss:sigma0=<r>,decay=<r>
/// Axis indices in `dir=e<i>` are 1-based. Throws Error(kParseError).
PerturbationSpec parse_perturbation(std::string_view text, std::uint64_t seed = 0);

/// Inverse of parse_perturbation (seed is not part of the text form).
std::string to_string(const PerturbationSpec& spec);

/// eps_k for k >= 1. A pure function of (spec, k, dim): re-sampling the same k
/// returns the identical vector regardless of call order.
Point sample_discrete(const PerturbationSpec& spec, std::int64_t k, Index dim);

/// eps(t) for the continuous system. power_decay is the exact c0/t^p profile
/// (throws kNonPositiveTime for t <= 0); gaussian_decay returns the draw frozen
/// for integrator step `step` (1-based), ignoring t inside the step.
Point sample_continuous(const PerturbationSpec& spec, double t, Index dim, std::int64_t step);

/// Per-coordinate standard deviation of the gaussian_decay model at index k.
double gaussian_sigma(const PerturbationSpec& spec, std::int64_t k);

namespace counter_rng {

/// Uniform double in (0, 1) computed as a pure function of the key.
double uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t coord,
               std::uint64_t stream);

/// Standard normal via Box-Muller on two counter uniforms (streams 2s, 2s+1),
/// cosine branch only.
double normal(std::uint64_t seed, std::uint64_t index, std::uint64_t coord,
              std::uint64_t stream = 0);

}  // namespace counter_rng

}  // namespace hessdamp
