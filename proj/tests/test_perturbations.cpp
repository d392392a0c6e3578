#include <doctest.h>

#include <cmath>
#include <vector>

#include "hessdamp/perturbations.hpp"
#include "support.hpp"

using namespace hessdamp;
using test::code_of;

TEST_CASE("none is identically zero") {
  const PerturbationSpec s = PerturbationSpec::none();
  for (std::int64_t k : {1, 7, 1000}) CHECK(sample_discrete(s, k, 3).norm() == 0.0);
  CHECK(sample_discrete(s, 0, 2).norm() == 0.0);
  CHECK(sample_continuous(s, 0.0, 2, 1).norm() == 0.0);
}

TEST_CASE("power decay along a fixed axis") {
  const auto s = PerturbationSpec::power_decay(1.0, 2.0, 0);
  const Point e = sample_discrete(s, 10, 2);
  CHECK(e[0] == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(e[1] == 0.0);
  CHECK(sample_continuous(PerturbationSpec::power_decay(2.0, 1.0, 0), 4.0, 1, 1).norm() ==
        doctest::Approx(0.5));
  CHECK(code_of([&] { sample_continuous(s, 0.0, 2, 1); }) == ErrorCode::kNonPositiveTime);
  CHECK(code_of([&] { sample_continuous(s, -1.0, 2, 1); }) == ErrorCode::kNonPositiveTime);
  CHECK(code_of([&] { sample_discrete(s, 0, 2); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([&] { sample_discrete(s, 1, 0); }) == ErrorCode::kDimensionMismatch);
}

TEST_CASE("power decay magnitude law holds to 1e-12 up to k = 1e6") {
  for (const auto& s : {PerturbationSpec::power_decay(0.1, 1.0, std::nullopt, 3),
                        PerturbationSpec::power_decay(2.5, 0.7, 1, 0),
                        PerturbationSpec::power_decay(1.0, 2.0, std::nullopt, 99)}) {
    for (std::int64_t k = 1; k <= 1000000; k = k * 3 + 1) {
      const double scaled = sample_discrete(s, k, 4).norm() * std::pow(double(k), s.p);
      CHECK(std::abs(scaled - s.c0) <= 1e-12 * s.c0);
    }
  }
}

TEST_CASE("random direction is a seeded unit vector") {
  const auto a = PerturbationSpec::power_decay(1.0, 1.0, std::nullopt, 11);
  const auto b = PerturbationSpec::power_decay(1.0, 1.0, std::nullopt, 12);
  const Point da = sample_discrete(a, 1, 5);
  CHECK(da.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((da - sample_discrete(a, 1, 5)).norm() == 0.0);
  CHECK((da - sample_discrete(b, 1, 5)).norm() > 1e-3);
  // Same direction at every k.
  CHECK((sample_discrete(a, 9, 5) * 9.0 - da).norm() <= 1e-14);
}

TEST_CASE("gaussian decay schedule and reproducibility") {
  const auto s = PerturbationSpec::gaussian_decay(0.001, 0.01, 5);
  CHECK(gaussian_sigma(s, 100) == doctest::Approx(0.0005).epsilon(1e-15));
  CHECK(gaussian_sigma(s, 0) == 0.001);

  std::vector<Point> forward, backward(50);
  for (std::int64_t k = 1; k <= 50; ++k) forward.push_back(sample_discrete(s, k, 3));
  for (std::int64_t k = 50; k >= 1; --k) backward[k - 1] = sample_discrete(s, k, 3);
  for (std::size_t i = 0; i < 50; ++i) CHECK((forward[i] - backward[i]).norm() == 0.0);
  CHECK((forward[0] - forward[1]).norm() > 0.0);

  auto other = s;
  other.seed = 6;
  CHECK((sample_discrete(other, 1, 3) - forward[0]).norm() > 0.0);
  // Continuous sampling freezes the draw of the integrator step.
  CHECK((sample_continuous(s, 123.0, 3, 7) - sample_discrete(s, 7, 3)).norm() == 0.0);
}

TEST_CASE("gaussian decay empirical standard deviation within 2%") {
  const auto s = PerturbationSpec::gaussian_decay(0.001, 0.01, 2024);
  const Index n = 100000;
  const Point e = sample_discrete(s, 100, n);
  const double mean = e.mean();
  const double sd = std::sqrt((e.array() - mean).square().sum() / double(n - 1));
  CHECK(std::abs(sd / 0.0005 - 1.0) < 0.02);
  CHECK(std::abs(mean) < 4 * 0.0005 / std::sqrt(double(n)));
}

TEST_CASE("counter uniforms are in (0,1) and well spread") {
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = counter_rng::uniform(1, i, 0, 0);
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.005);
  CHECK(counter_rng::uniform(1, 2, 3, 4) == counter_rng::uniform(1, 2, 3, 4));
  CHECK(counter_rng::uniform(1, 2, 3, 4) != counter_rng::uniform(1, 2, 3, 5));
}

TEST_CASE("square integrability of power decay for p > 1/2") {
  // Integrate |eps(t)|^2 over [1, T] in u = ln t with Simpson's rule and
  // compare against c0^2 (1 - T^{1-2p}) / (2p - 1).
  for (const double p : {0.75, 1.0, 2.0}) {
    const auto s = PerturbationSpec::power_decay(1.5, p, 0);
    const auto integral = [&](double T) {
      const int n = 20000;
      const double h = std::log(T) / n;
      double acc = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double t = std::exp(i * h);
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * sample_continuous(s, t, 1, 1).squaredNorm() * t;
      }
      return acc * h / 3.0;
    };
    double prev = integral(2.0);
    double tail = 0.0;
    for (double T = 4.0; T <= 1e13; T *= 2.0) {
      const double cur = integral(T);
      tail = cur - prev;
      CHECK(tail >= 0.0);
      prev = cur;
    }
    CHECK(tail < 1e-6);
    CHECK(prev == doctest::Approx(1.5 * 1.5 / (2 * p - 1)).epsilon(1e-5));
  }
}

TEST_CASE("perturbation spec grammar") {
  CHECK(parse_perturbation("none").is_none());
  const auto pw = parse_perturbation("power:c0=0.1,p=2,dir=e1", 4);
  CHECK(pw.model == PerturbationModel::kPowerDecay);
  CHECK(pw.c0 == 0.1);
  CHECK(pw.p == 2.0);
  CHECK(pw.axis == Index{0});
  CHECK(pw.seed == 4);
  CHECK(to_string(pw) == "power:c0=0.1,p=2,dir=e1");
  CHECK(!parse_perturbation("power:c0=1,p=1").axis.has_value());
  const auto g = parse_perturbation("gauss:sigma0=0.001,decay=0.01");
  CHECK(g.model == PerturbationModel::kGaussianDecay);
  CHECK(to_string(g) == "gauss:sigma0=0.001,decay=0.01");
  CHECK(to_string(parse_perturbation(to_string(g))) == to_string(g));
  for (const char* bad : {"power", "power:c0=1", "power:c0=1,p=0", "power:c0=x,p=1",
                          "power:c0=1,p=1,dir=e0", "power:c0=1,p=1,dir=up", "gauss:sigma0=1",
                          "gauss:sigma0=1,decay=1,p=2", "uniform:a=1", "power:c0=1,p=1,q=2"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { parse_perturbation(bad); }) == ErrorCode::kParseError);
  }
}
