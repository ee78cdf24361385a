#include <doctest.h>

#include <cmath>

#include "erlq/fractional_calculus.hpp"

using namespace erlq;

TEST_CASE("Caputo derivative of a linear function") {
  const FracParams p{0.0, 0.6};
  auto f = SampledFunction::sample(uniform_grid(1.0, 1001), [](double t) { return t; });
  for (double t : {0.25, 0.5, 1.0}) {
    auto d = caputo_tempered_derivative(f, p, t, 1e-6);
    CHECK(d.value == doctest::Approx(std::pow(t, 1.0 - p.alpha) / std::tgamma(2.0 - p.alpha)).epsilon(1e-6));
  }
}

TEST_CASE("tempered Caputo derivative of an exponential") {
  // For f = e^{-t}: D f = e^{-theta t} ... has transform ((s+theta)^a - theta^a) (F(s) - f(0)/s)
  const FracParams p{0.5, 0.7};
  auto f = SampledFunction::sample(uniform_grid(16.0, 16001), [](double t) { return std::exp(-t); });
  auto d = caputo_tempered_derivative_all(f, p);
  auto g = SampledFunction{f.grid, d, 0.0};
  for (double s : {1.0, 2.0}) {
    const double exact = (std::pow(s + p.theta, p.alpha) - std::pow(p.theta, p.alpha)) * (1.0 / (s + 1.0) - 1.0 / s);
    auto lt = numerical_laplace(g, s, 1e-6, 1e-4);
    CHECK(lt.value == doctest::Approx(exact).epsilon(1e-4));
  }
}

TEST_CASE("Riemann-Liouville and Caputo forms differ by the initial value term") {
  const FracParams p{0.3, 0.5};
  const auto grid = uniform_grid(1.0, 2001);
  auto f = SampledFunction::sample(grid, [](double t) { return 1.0 + t * t; });
  auto one = SampledFunction::sample(grid, [](double) { return 1.0; });
  const double t = 0.5;
  CHECK(caputo_tempered_derivative(one, p, t).value == doctest::Approx(0.0));
  const double gap = rl_tempered_derivative(f, p, t).value - caputo_tempered_derivative(f, p, t).value;
  CHECK(gap == doctest::Approx(rl_tempered_derivative(one, p, t).value).epsilon(1e-6));
}

TEST_CASE("caputo tail without tempering") {
  const FracParams p{0.0, 0.4};
  for (double t : {0.1, 1.0, 3.0}) CHECK(caputo_tail(p, t) == doctest::Approx(std::pow(t, -p.alpha)).epsilon(1e-12));
}

TEST_CASE("numerical Laplace transform of a callable") {
  auto lt = numerical_laplace([](double t) { return t * std::exp(-t); }, 0.5);
  CHECK(lt.value == doctest::Approx(1.0 / 2.25).epsilon(1e-11));
}

TEST_CASE("sampled function validation") {
  CHECK_THROWS_AS(uniform_grid(0.0, 10), domain_error);
  SampledFunction bad{{0.0, 0.5, 0.5}, {1.0, 1.0, 1.0}, 1.0};
  CHECK_THROWS_AS(bad.validate(), domain_error);
  SampledFunction shifted{{0.1, 0.5, 0.6}, {1.0, 1.0, 1.0}, 1.0};
  CHECK_THROWS_AS(shifted.validate(), domain_error);
  CHECK_THROWS_AS((FracParams{0.0, 1.0}.validate()), domain_error);
  auto f = SampledFunction::sample(uniform_grid(1.0, 11), [](double t) { return t; });
  CHECK_THROWS_AS(caputo_tempered_derivative(f, {0.0, 0.5}, 0.33), domain_error);
}
