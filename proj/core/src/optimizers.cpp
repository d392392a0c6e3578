#include "hessdamp/optimizers.hpp"

#include <cmath>
#include <string>

#include "hessdamp/analysis.hpp"
#include "hessdamp/error.hpp"

namespace hessdamp {

namespace {

constexpr double kDivergenceBound = 1e12;

void require_finite(const Point& x, const char* what) {
  if (!all_finite(x)) {
    throw Error(ErrorCode::kNonFiniteIterate, std::string(what) + " produced a non-finite iterate");
  }
}

bool is_baseline(Variant v) { return v != Variant::kIaa; }

Point iaa_update(const Problem& p, const AlgorithmConfig& cfg, const Point& x_k,
                 const Point& x_km1, const Point& eps_k) {
  const Point d = x_k - x_km1;
  const Point y = x_k + cfg.alpha * d;
  const Point z = x_k + cfg.beta * d;
  return y - cfg.s * p.gradient(z) + cfg.s * eps_k;
}

BaselineStep baseline_update(const Problem& p, const AlgorithmConfig& cfg, const Point& x_k,
                             const Point& x_km1, const std::optional<Point>& g_km1,
                             const Point& eps_k, std::int64_t& evals) {
  BaselineStep out;
  const Point d = x_k - x_km1;
  out.g_k = p.gradient(x_k);
  switch (cfg.variant) {
    case Variant::kHbm:
      ++evals;
      out.x_next = x_k + cfg.alpha * d - cfg.beta * out.g_k;
      break;
    case Variant::kNag: {
      // Only grad f(y) drives the update; grad f(x_k) is the cached value.
      const Point y = x_k + cfg.alpha * d;
      ++evals;
      out.x_next = y - cfg.beta * p.gradient(y);
      break;
    }
    case Variant::kHbmH:
    case Variant::kNagH: {
      if (!g_km1) {
        throw Error(ErrorCode::kMissingGradientCache,
                    "Hessian-corrected methods need grad f(x_{k-1})");
      }
      ++evals;
      const Point y = x_k + cfg.alpha * d - cfg.theta * (out.g_k - *g_km1);
      if (cfg.variant == Variant::kHbmH) {
        out.x_next = y - cfg.beta * out.g_k;
      } else {
        ++evals;
        out.x_next = y - cfg.beta * p.gradient(y);
      }
      break;
    }
    case Variant::kIaa:
      throw Error(ErrorCode::kInvalidArgument, "step_baseline called with an IAA config");
  }
  out.x_next += cfg.beta * eps_k;
  return out;
}

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kIaa: return "iaa";
    case Variant::kHbm: return "hbm";
    case Variant::kNag: return "nag";
    case Variant::kHbmH: return "hbm-h";
    case Variant::kNagH: return "nag-h";
  }
  return "?";
}

Variant parse_variant(std::string_view text) {
  if (text == "iaa") return Variant::kIaa;
  if (text == "hbm") return Variant::kHbm;
  if (text == "nag") return Variant::kNag;
  if (text == "hbm-h") return Variant::kHbmH;
  if (text == "nag-h") return Variant::kNagH;
  throw Error(ErrorCode::kParseError, "unknown algorithm '" + std::string(text) + "'");
}

std::string_view to_string(StopReason r) {
  return r == StopReason::kTolerance ? "tolerance" : "max_iter";
}

Point step_iaa(const Problem& p, const AlgorithmConfig& cfg, const Point& x_k, const Point& x_km1,
               const Point& eps_k) {
  if (cfg.variant != Variant::kIaa) {
    throw Error(ErrorCode::kInvalidArgument, "step_iaa called with a baseline config");
  }
  Point next = iaa_update(p, cfg, x_k, x_km1, eps_k);
  require_finite(next, "IAA update");
  return next;
}

BaselineStep step_baseline(const Problem& p, const AlgorithmConfig& cfg, const Point& x_k,
                           const Point& x_km1, const std::optional<Point>& g_km1,
                           const Point& eps_k, std::int64_t* grad_evals) {
  std::int64_t evals = 0;
  BaselineStep out = baseline_update(p, cfg, x_k, x_km1, g_km1, eps_k, evals);
  require_finite(out.x_next, "baseline update");
  if (grad_evals != nullptr) *grad_evals += evals;
  return out;
}

RunResult run(const Problem& p, const AlgorithmConfig& cfg, const Point& x0, const Point& x1,
              const StoppingRule& stop) {
  if (x0.size() != p.dimension() || x1.size() != p.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch, "initial points do not match problem dimension");
  }
  if (!all_finite(x0) || !all_finite(x1)) {
    throw Error(ErrorCode::kNonFiniteInput, "initial points must be finite");
  }
  if ((stop.tol && !(*stop.tol > 0)) || stop.max_iter < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need tol > 0 and max_iter >= 1");
  }
  if (cfg.variant == Variant::kIaa && !(cfg.s > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "IAA step size s must be positive");
  }
  if (is_baseline(cfg.variant) && !(cfg.beta > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "baseline step size beta must be positive");
  }

  RunResult result;
  const bool iaa = cfg.variant == Variant::kIaa;
  if (iaa) {
    const Theorem t = cfg.perturb.is_none() ? Theorem::kT41 : Theorem::kT42;
    if (!strictly_inside(p, t, cfg.alpha, cfg.beta)) {
      result.warnings.push_back("(alpha, beta) = (" + std::to_string(cfg.alpha) + ", " +
                                std::to_string(cfg.beta) + ") outside the " +
                                std::string(to_string(t)) + " box; no certified rate");
    }
    if (std::abs(cfg.s * p.lipschitz() - 1.0) > 1e-12) {
      result.warnings.push_back("s != 1/L; theorem constants do not apply");
    }
  }

  const std::optional<double> fs = p.min_value();
  const std::optional<Point> xs = p.minimizer();
  const std::optional<double> c =
      iaa && cfg.alpha > 0 ? std::optional<double>(cfg.beta / (cfg.alpha * cfg.s)) : std::nullopt;
  std::int64_t evals = 0;

  auto make_record = [&](std::int64_t k, const Point& x, const Point& prev, const Point& g) {
    IterateRecord r;
    r.k = k;
    r.x = x;
    const double f = p.value(x);
    r.value_error = fs ? f - *fs : f;
    r.grad_norm = g.norm();
    if (xs) r.dist = (x - *xs).norm();
    r.step = (x - prev).norm();
    if (c && fs) r.energy = f - *fs + 0.5 * *c * (x - prev).squaredNorm();
    r.grad_evals = evals;
    return r;
  };
  auto converged = [&](const IterateRecord& r) {
    return stop.tol && (fs ? r.value_error : r.grad_norm) <= *stop.tol;
  };

  // Convention x_{-1} := x_0 (zero step at k = 0); g_0 = grad f(x_0).
  Point g_prev = p.gradient(x0);
  Point g_cur = p.gradient(x1);
  result.records.push_back(make_record(0, x0, x0, g_prev));
  result.records.push_back(make_record(1, x1, x0, g_cur));

  Point x_prev = x0;
  Point x_cur = x1;
  std::int64_t k = 1;
  while (true) {
    if (converged(result.records.back())) {
      result.reason = StopReason::kTolerance;
      break;
    }
    if (k >= stop.max_iter) {
      result.reason = StopReason::kMaxIter;
      break;
    }
    const Point eps = sample_discrete(cfg.perturb, k, p.dimension());
    Point next;
    if (iaa) {
      ++evals;
      next = iaa_update(p, cfg, x_cur, x_prev, eps);
    } else {
      BaselineStep st = baseline_update(p, cfg, x_cur, x_prev, g_prev, eps, evals);
      next = std::move(st.x_next);
      g_prev = std::move(st.g_k);
    }
    if (!all_finite(next)) {
      throw Error(ErrorCode::kNonFiniteIterate,
                  "iterate became non-finite after k = " + std::to_string(k));
    }
    if (next.norm() > kDivergenceBound) {
      throw Error(ErrorCode::kDivergence, "|x| exceeded 1e12 at k = " + std::to_string(k + 1));
    }
    x_prev = std::move(x_cur);
    x_cur = std::move(next);
    ++k;
    const Point g = p.gradient(x_cur);
    result.records.push_back(make_record(k, x_cur, x_prev, g));
  }
  return result;
}

}  // namespace hessdamp
