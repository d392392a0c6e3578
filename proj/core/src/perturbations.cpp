#include "hessdamp/perturbations.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "hessdamp/error.hpp"

namespace hessdamp {

namespace counter_rng {

namespace {

// SplitMix64 finalizer.
constexpr std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t key(std::uint64_t seed, std::uint64_t index, std::uint64_t coord,
                            std::uint64_t stream) {
  std::uint64_t h = mix(seed);
  h = mix(h ^ index);
  h = mix(h ^ coord);
  return mix(h ^ stream);
}

}  // namespace

double uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t coord,
               std::uint64_t stream) {
  const std::uint64_t bits = key(seed, index, coord, stream) >> 11;  // 53 bits
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double normal(std::uint64_t seed, std::uint64_t index, std::uint64_t coord, std::uint64_t stream) {
  const double u1 = uniform(seed, index, coord, 2 * stream);
  const double u2 = uniform(seed, index, coord, 2 * stream + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace counter_rng

namespace {

// Streams 0/1 carry the per-step gaussian draws, 2/3 the random direction.
constexpr std::uint64_t kNoiseStream = 0;
constexpr std::uint64_t kDirectionStream = 1;

Point direction(const PerturbationSpec& spec, Index dim) {
  Point d = Point::Zero(dim);
  if (spec.axis) {
    if (*spec.axis < 0 || *spec.axis >= dim) {
      throw Error(ErrorCode::kDimensionMismatch, "perturbation axis outside problem dimension");
    }
    d[*spec.axis] = 1.0;
    return d;
  }
  for (Index i = 0; i < dim; ++i) {
    d[i] = counter_rng::normal(spec.seed, 0, static_cast<std::uint64_t>(i), kDirectionStream);
  }
  return d / d.norm();
}

double parse_real(std::string_view text, std::string_view field) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::kParseError,
                "bad value '" + std::string(text) + "' for " + std::string(field));
  }
  return v;
}

std::string fmt_real(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

PerturbationSpec PerturbationSpec::power_decay(double c0, double p, std::optional<Index> axis,
                                               std::uint64_t seed) {
  if (!(c0 >= 0) || !(p > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "power_decay needs c0 >= 0 and p > 0");
  }
  PerturbationSpec s;
  s.model = PerturbationModel::kPowerDecay;
  s.c0 = c0;
  s.p = p;
  s.axis = axis;
  s.seed = seed;
  return s;
}

PerturbationSpec PerturbationSpec::gaussian_decay(double sigma0, double decay,
                                                  std::uint64_t seed) {
  if (!(sigma0 >= 0) || !(decay >= 0)) {
    throw Error(ErrorCode::kInvalidArgument, "gaussian_decay needs sigma0 >= 0 and decay >= 0");
  }
  PerturbationSpec s;
  s.model = PerturbationModel::kGaussianDecay;
  s.sigma0 = sigma0;
  s.decay = decay;
  s.seed = seed;
  return s;
}

PerturbationSpec parse_perturbation(std::string_view text, std::uint64_t seed) {
  if (text == "none" || text.empty()) {
    PerturbationSpec s;
    s.seed = seed;
    return s;
  }
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::kParseError, "perturbation spec '" + std::string(text) +
                                            "' must be none, power:... or gauss:...");
  }
  const std::string_view kind = text.substr(0, colon);
  std::string_view rest = text.substr(colon + 1);

  std::optional<double> c0, p, sigma0, decay;
  std::optional<Index> axis;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kParseError, "expected key=value, got '" + std::string(item) + "'");
    }
    const std::string_view k = item.substr(0, eq);
    const std::string_view v = item.substr(eq + 1);
    if (k == "c0") {
      c0 = parse_real(v, k);
    } else if (k == "p") {
      p = parse_real(v, k);
    } else if (k == "sigma0") {
      sigma0 = parse_real(v, k);
    } else if (k == "decay") {
      decay = parse_real(v, k);
    } else if (k == "dir") {
      if (v == "random") {
        axis.reset();
      } else if (v.size() >= 2 && v[0] == 'e') {
        const double i = parse_real(v.substr(1), "dir");
        if (i < 1 || std::floor(i) != i) {
          throw Error(ErrorCode::kParseError, "dir axis must be e1, e2, ...");
        }
        axis = static_cast<Index>(i) - 1;
      } else {
        throw Error(ErrorCode::kParseError, "dir must be e<i> or random");
      }
    } else {
      throw Error(ErrorCode::kParseError, "unknown perturbation key '" + std::string(k) + "'");
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }

  if (kind == "power") {
    if (!c0 || !p) throw Error(ErrorCode::kParseError, "power needs c0 and p");
    if (sigma0 || decay) throw Error(ErrorCode::kParseError, "power does not take sigma0/decay");
    if (!(*c0 >= 0) || !(*p > 0)) throw Error(ErrorCode::kParseError, "power needs c0>=0, p>0");
    return PerturbationSpec::power_decay(*c0, *p, axis, seed);
  }
  if (kind == "gauss") {
    if (!sigma0 || !decay) throw Error(ErrorCode::kParseError, "gauss needs sigma0 and decay");
    if (c0 || p || axis) throw Error(ErrorCode::kParseError, "gauss does not take c0/p/dir");
    if (!(*sigma0 >= 0) || !(*decay >= 0)) {
      throw Error(ErrorCode::kParseError, "gauss needs sigma0>=0, decay>=0");
    }
    return PerturbationSpec::gaussian_decay(*sigma0, *decay, seed);
  }
  throw Error(ErrorCode::kParseError, "unknown perturbation model '" + std::string(kind) + "'");
}

std::string to_string(const PerturbationSpec& spec) {
  switch (spec.model) {
    case PerturbationModel::kNone:
      return "none";
    case PerturbationModel::kPowerDecay: {
      std::string s = "power:c0=" + fmt_real(spec.c0) + ",p=" + fmt_real(spec.p);
      s += spec.axis ? ",dir=e" + std::to_string(*spec.axis + 1) : ",dir=random";
      return s;
    }
    case PerturbationModel::kGaussianDecay:
      return "gauss:sigma0=" + fmt_real(spec.sigma0) + ",decay=" + fmt_real(spec.decay);
  }
  return "none";
}

double gaussian_sigma(const PerturbationSpec& spec, std::int64_t k) {
  return spec.sigma0 / (1.0 + spec.decay * static_cast<double>(k));
}

Point sample_discrete(const PerturbationSpec& spec, std::int64_t k, Index dim) {
  switch (spec.model) {
    case PerturbationModel::kNone:
      return Point::Zero(dim);
    case PerturbationModel::kPowerDecay: {
      if (k < 1) throw Error(ErrorCode::kInvalidArgument, "perturbation index must be >= 1");
      return direction(spec, dim) * (spec.c0 / std::pow(static_cast<double>(k), spec.p));
    }
    case PerturbationModel::kGaussianDecay: {
      if (k < 1) throw Error(ErrorCode::kInvalidArgument, "perturbation index must be >= 1");
      const double sigma = gaussian_sigma(spec, k);
      Point e(dim);
      for (Index i = 0; i < dim; ++i) {
        e[i] = sigma * counter_rng::normal(spec.seed, static_cast<std::uint64_t>(k),
                                           static_cast<std::uint64_t>(i), kNoiseStream);
      }
      return e;
    }
  }
  return Point::Zero(dim);
}

Point sample_continuous(const PerturbationSpec& spec, double t, Index dim, std::int64_t step) {
  switch (spec.model) {
    case PerturbationModel::kNone:
      return Point::Zero(dim);
    case PerturbationModel::kPowerDecay:
      if (!(t > 0)) {
        throw Error(ErrorCode::kNonPositiveTime, "power_decay perturbation needs t > 0");
      }
      return direction(spec, dim) * (spec.c0 / std::pow(t, spec.p));
    case PerturbationModel::kGaussianDecay:
      return sample_discrete(spec, step, dim);
  }
  return Point::Zero(dim);
}

}  // namespace hessdamp
