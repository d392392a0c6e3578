#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hessdamp/perturbations.hpp"
#include "hessdamp/point.hpp"
#include "hessdamp/problems.hpp"

namespace hessdamp {

struct OdeState {
  double t = 0.0;
  Point x;
  Point v;  // x'
};

struct OdeDerivative {
  Point dx;
  Point dv;
};

/// Right-hand side of  x'' + alpha x' + grad f(x + beta x') = eps(t)  written
/// as a first-order system. `step` selects the frozen draw of gaussian noise.
/// Throws kNonFiniteState.
OdeDerivative rhs(const Problem& p, double alpha, double beta, const PerturbationSpec& pert,
                  const OdeState& state, std::int64_t step = 1);

struct TrajectoryRecord {
  double t = 0.0;
  Point x;
  Point v;
  double value_error = 0.0;  // f(x + beta v) - f*
  double traj_error = 0.0;   // |x - x*|
  double speed = 0.0;        // |v|
  double energy = 0.0;       // continuous_energy(alpha, beta, x, v)
};

struct IntegrationOptions {
  double t0 = 0.0;
  double t_end = 10.0;
  double dt = 1e-3;
  std::int64_t record_every = 1;
};

/// Fixed-step classical RK4. Records are taken at t0 + j * record_every * dt
/// plus the final step (t >= t_end - dt). Requires a problem with known x*.
/// Throws kDivergence (|x| or |v| > 1e12) or kNonFiniteState.
std::vector<TrajectoryRecord> integrate(const Problem& p, double alpha, double beta,
                                        const PerturbationSpec& pert, const Point& x0,
                                        const Point& v0, const IntegrationOptions& options);

struct RateCertificate {
  bool pass = false;
  double worst_slack = 0.0;
};

/// Checks E(t) <= E(t0) exp(-(lambda kappa / 2)(t - t0)) at every record, with
/// tolerance max(1e-6, 1e-6 E(t0)). worst_slack is the smallest
/// bound - E(t) observed (tolerance excluded). Throws kEmptyTrajectory.
RateCertificate rate_certificate(std::span<const TrajectoryRecord> records, double lambda,
                                 double kappa);

}  // namespace hessdamp
