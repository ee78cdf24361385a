#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "erlq/subordinators.hpp"

using namespace erlq;

TEST_CASE("laplace exponent") {
  const TemperedStableParams p{0.5, 0.7};
  CHECK(laplace_exponent(p, 0.0) == doctest::Approx(0.0));
  CHECK(laplace_exponent(p, 1.5) == doctest::Approx(std::pow(2.0, 0.7) - std::pow(0.5, 0.7)));
  CHECK_THROWS_AS(laplace_exponent({0.5, 1.2}, 1.0), domain_error);
}

TEST_CASE("half-stable increments have the Levy median") {
  Rng rng = path_stream(7, 0);
  const int n = 20000;
  int below = 0;
  for (int i = 0; i < n; ++i) below += sample_stable_increment(0.5, 1.0, rng) <= 1.0990546691588662;
  const double frac = static_cast<double>(below) / n;
  CHECK(std::fabs(frac - 0.5) < 4.0 * 0.5 / std::sqrt(n));
}

TEST_CASE("tempered increments match the Laplace transform") {
  const TemperedStableParams p{0.5, 0.7};
  Rng rng = path_stream(11, 0);
  const int n = 20000;
  const double dt = 0.3, s = 1.0;
  double acc = 0.0, acc2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = std::exp(-s * sample_tempered_stable_increment(p, dt, rng));
    acc += v;
    acc2 += v * v;
  }
  const double mean = acc / n;
  const double se = std::sqrt((acc2 / n - mean * mean) / n);
  CHECK(std::fabs(mean - std::exp(-dt * laplace_exponent(p, s))) < 4.0 * se);
}

TEST_CASE("gamma increments have the right mean") {
  const GammaParams p{2.0, 3.0};
  Rng rng = path_stream(3, 1);
  const int n = 20000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += sample_gamma_increment(p, 0.5, rng);
  const double sd = std::sqrt(p.a * 0.5) / p.b;
  CHECK(std::fabs(acc / n - p.a * 0.5 / p.b) < 4.0 * sd / std::sqrt(n));
}

TEST_CASE("inverse paths are nondecreasing and coarsen consistently") {
  Rng rng = path_stream(5, 2);
  auto path = inverse_path({0.5, 0.7}, 2.0, 1e-2, rng);
  CHECK(std::is_sorted(path.crossings.begin(), path.crossings.end()));
  CHECK(path.crossings.back() > path.horizon);
  auto coarse = coarsen(path);
  CHECK(coarse.step == doctest::Approx(2e-2));
  for (double t : {0.1, 0.7, 1.3, 2.0}) {
    CHECK(coarse.at(t) <= path.at(t) + 1e-12);
    CHECK(path.at(t) - coarse.at(t) <= coarse.step + 1e-12);
  }
  CHECK(path.at(-1.0) == 0.0);
}

TEST_CASE("gamma density integrates to one") {
  const GammaParams p{1.5, 2.0};
  double acc = 0.0;
  const double h = 1e-3;
  for (int i = 0; i < 40000; ++i) acc += gamma_density(p, (i + 0.5) * h, 2.0) * h;
  CHECK(acc == doctest::Approx(1.0).epsilon(1e-5));
}

namespace {
double inverse_mean(const GammaParams& p, double t, InverseGammaForm form) {
  const double h = 2.5e-3;
  double acc = 0.0;
  for (int i = 0; i < 8000; ++i) {
    const double x = (i + 0.5) * h;
    acc += x * inverse_gamma_density(p, x, t, form).value * h;
  }
  return acc;
}
}  // namespace

TEST_CASE("inverse gamma density has the quadrature mean") {
  // E L(1) for a = b = 1, from int_0^inf P(a x, b t) dx at high precision
  const GammaParams p{1.0, 1.0};
  CHECK(inverse_mean(p, 1.0, InverseGammaForm::time_scaled) == doctest::Approx(1.4812038045152895).epsilon(1e-5));
  CHECK(inverse_mean(p, 1.0, InverseGammaForm::printed) == doctest::Approx(1.4812038045152895).epsilon(1e-5));
}

TEST_CASE("the two inverse gamma forms agree only when b = t = 1") {
  const GammaParams p{1.0, 2.0};
  const double a = inverse_gamma_density({1.0, 1.0}, 0.7, 1.0, InverseGammaForm::printed).value;
  const double b = inverse_gamma_density({1.0, 1.0}, 0.7, 1.0, InverseGammaForm::time_scaled).value;
  CHECK(a == doctest::Approx(b).epsilon(1e-9));
  for (double t : {0.5, 1.0}) {
    const double c = inverse_gamma_density(p, 0.7, t, InverseGammaForm::printed).value;
    const double d = inverse_gamma_density(p, 0.7, t, InverseGammaForm::time_scaled).value;
    CHECK(std::fabs(c - d) > 1e-3);
  }
  CHECK_THROWS_AS(inverse_gamma_density(p, 2.0, 1.0), domain_error);
}
