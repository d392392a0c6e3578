#include "hessdamp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hessdamp/analysis.hpp"
#include "hessdamp/error.hpp"

namespace hessdamp {

namespace {

constexpr double kDivergenceBound = 1e12;

// Stage derivative with the perturbation already resolved at the stage time.
OdeDerivative eval(const Problem& p, double alpha, double beta, const Point& x, const Point& v,
                   const Point* eps) {
  OdeDerivative d;
  d.dx = v;
  d.dv = -alpha * v - p.gradient(x + beta * v);
  if (eps != nullptr) d.dv += *eps;
  return d;
}

TrajectoryRecord make_record(const Problem& p, double alpha, double beta, double t,
                             const Point& x, const Point& v) {
  TrajectoryRecord r;
  r.t = t;
  r.x = x;
  r.v = v;
  r.value_error = p.value(x + beta * v) - p.require_min_value();
  r.traj_error = (x - p.require_minimizer()).norm();
  r.speed = v.norm();
  r.energy = continuous_energy(p, alpha, beta, x, v);
  return r;
}

}  // namespace

OdeDerivative rhs(const Problem& p, double alpha, double beta, const PerturbationSpec& pert,
                  const OdeState& state, std::int64_t step) {
  if (state.x.size() != p.dimension() || state.v.size() != p.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "state dimension does not match problem");
  }
  if (!all_finite(state.x) || !all_finite(state.v)) {
    throw Error(ErrorCode::kNonFiniteState, "state at t = " + std::to_string(state.t));
  }
  if (pert.is_none()) return eval(p, alpha, beta, state.x, state.v, nullptr);
  const Point eps = sample_continuous(pert, state.t, p.dimension(), step);
  return eval(p, alpha, beta, state.x, state.v, &eps);
}

std::vector<TrajectoryRecord> integrate(const Problem& p, double alpha, double beta,
                                        const PerturbationSpec& pert, const Point& x0,
                                        const Point& v0, const IntegrationOptions& options) {
  const double t0 = options.t0;
  const double dt = options.dt;
  if (!(dt > 0)) throw Error(ErrorCode::kInvalidArgument, "dt must be positive");
  if (!(options.t_end > t0)) throw Error(ErrorCode::kInvalidArgument, "t_end must exceed t0");
  if (options.record_every < 1) {
    throw Error(ErrorCode::kInvalidArgument, "record_every must be positive");
  }
  if (!(alpha > 0) || !(beta >= 0)) {
    throw Error(ErrorCode::kInvalidArgument, "need alpha > 0 and beta >= 0");
  }
  if (x0.size() != p.dimension() || v0.size() != p.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "initial state dimension does not match problem");
  }
  if (!all_finite(x0) || !all_finite(v0)) {
    throw Error(ErrorCode::kNonFiniteState, "initial state is not finite");
  }
  p.require_minimizer();
  p.require_min_value();

  const auto steps =
      static_cast<std::int64_t>(std::ceil((options.t_end - t0) / dt - 1e-9));
  const bool perturbed = !pert.is_none();
  const Index dim = p.dimension();

  std::vector<TrajectoryRecord> out;
  out.reserve(static_cast<std::size_t>(steps / options.record_every + 2));

  Point x = x0;
  Point v = v0;
  out.push_back(make_record(p, alpha, beta, t0, x, v));

  Point e1, e2, e4;
  for (std::int64_t i = 0; i < steps; ++i) {
    const double t = t0 + static_cast<double>(i) * dt;
    const double h = dt;
    const Point* p1 = nullptr;
    const Point* p2 = nullptr;
    const Point* p4 = nullptr;
    if (perturbed) {
      // Gaussian draws are frozen over the step (index i + 1); power decay is
      // evaluated at each stage time.
      e1 = sample_continuous(pert, t, dim, i + 1);
      e2 = sample_continuous(pert, t + 0.5 * h, dim, i + 1);
      e4 = sample_continuous(pert, t + h, dim, i + 1);
      p1 = &e1;
      p2 = &e2;
      p4 = &e4;
    }
    const OdeDerivative k1 = eval(p, alpha, beta, x, v, p1);
    const OdeDerivative k2 = eval(p, alpha, beta, x + 0.5 * h * k1.dx, v + 0.5 * h * k1.dv, p2);
    const OdeDerivative k3 = eval(p, alpha, beta, x + 0.5 * h * k2.dx, v + 0.5 * h * k2.dv, p2);
    const OdeDerivative k4 = eval(p, alpha, beta, x + h * k3.dx, v + h * k3.dv, p4);
    x += (h / 6.0) * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    v += (h / 6.0) * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);

    const double t_next = t0 + static_cast<double>(i + 1) * dt;
    if (!all_finite(x) || !all_finite(v)) {
      throw Error(ErrorCode::kNonFiniteState, "state became non-finite at t = " +
                                                  std::to_string(t_next));
    }
    if (x.norm() > kDivergenceBound || v.norm() > kDivergenceBound) {
      throw Error(ErrorCode::kDivergence, "trajectory blew up at t = " + std::to_string(t_next));
    }
    const bool last = i + 1 == steps;
    if ((i + 1) % options.record_every == 0 || last) {
      out.push_back(make_record(p, alpha, beta, t_next, x, v));
    }
  }
  return out;
}

RateCertificate rate_certificate(std::span<const TrajectoryRecord> records, double lambda,
                                 double kappa) {
  if (records.empty()) throw Error(ErrorCode::kEmptyTrajectory, "no records to certify");
  const double t0 = records.front().t;
  const double e0 = records.front().energy;
  const double tol = std::max(1e-6, 1e-6 * e0);
  const double decay = lambda * kappa / 2.0;
  RateCertificate cert;
  cert.worst_slack = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    const double bound = e0 * std::exp(-decay * (r.t - t0));
    cert.worst_slack = std::min(cert.worst_slack, bound - r.energy);
  }
  cert.pass = cert.worst_slack >= -tol;
  return cert;
}

}  // namespace hessdamp
