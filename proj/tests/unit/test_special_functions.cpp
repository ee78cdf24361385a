#include <doctest.h>

#include <cmath>

#include "erlq/fractional_calculus.hpp"
#include "erlq/special_functions.hpp"

using namespace erlq;

TEST_CASE("ml3 matches high-precision partial sums") {
  auto v = ml3({0.5, 1.0, 2.0, -1.0}, 1e-14);
  CHECK(v.converged());
  CHECK(v.value == doctest::Approx(0.15437156137190844).epsilon(1e-13));
  CHECK(v.abs_error_bound < 1e-12);

  v = ml3({0.7, 1.4, 2.0, -0.5}, 1e-14);
  CHECK(v.value == doctest::Approx(0.50111923636367869).epsilon(1e-13));
}

TEST_CASE("ml2 reference values and reductions") {
  auto v = ml2(0.7, 1.7, 0.3, 1e-14);
  CHECK(v.value == doctest::Approx(1.3895444195915843).epsilon(1e-13));

  for (double x : {-3.0, -0.5, 0.0, 0.8, 2.5}) {
    CHECK(ml2(1.0, 1.0, x, 1e-15).value == doctest::Approx(std::exp(x)).epsilon(1e-13));
    // E_{2,1}(-x^2) = cos x
    CHECK(ml2(2.0, 1.0, -x * x, 1e-15).value == doctest::Approx(std::cos(x)).epsilon(1e-12));
  }
  // E_{1,2}(x) = (e^x - 1)/x
  CHECK(ml2(1.0, 2.0, 1.5, 1e-15).value == doctest::Approx(std::expm1(1.5) / 1.5).epsilon(1e-13));
}

TEST_CASE("ml3 Laplace transform") {
  // int_0^inf e^{-s t} t^{b-1} E^g_{a,b}(x t^a) dt = s^{a g - b} / (s^a - x)^g
  const double a = 0.7, b = 1.4, g = 2.0, x = -0.5, s = 2.0;
  auto f = [&](double t) {
    if (t == 0.0 || t > 60.0) return 0.0;
    return std::pow(t, b - 1.0) * ml3({a, b, g, x * std::pow(t, a)}, 1e-15).value;
  };
  auto lt = numerical_laplace(f, s, 1e-11);
  CHECK(lt.value == doctest::Approx(0.22155653767061336).epsilon(1e-9));
  CHECK(std::pow(s, a * g - b) / std::pow(std::pow(s, a) - x, g) ==
        doctest::Approx(0.22155653767061336).epsilon(1e-14));
}

TEST_CASE("ml3 reports exhausted term budget") {
  auto v = ml3({0.5, 1.0, 1.0, -4.0}, 1e-15, 5);
  CHECK(v.status == Status::unconverged);
  CHECK(v.terms_used <= 5);
}

TEST_CASE("ml3 rejects invalid parameters") {
  CHECK_THROWS_AS(ml3({0.0, 1.0, 1.0, 0.1}, 1e-10), domain_error);
  CHECK_THROWS_AS(ml3({0.5, -1.0, 1.0, 0.1}, 1e-10), domain_error);
  CHECK_THROWS_AS(ml3({0.5, 1.0, 1.0, NAN}, 1e-10), domain_error);
  CHECK_THROWS_AS(ml3({0.5, 1.0, 1.0, 0.1}, 0.0), domain_error);
}

TEST_CASE("log_gamma") {
  for (double x : {0.1, 0.5, 1.0, 2.5, 10.0, 171.5, 1e4})
    CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-14));
  CHECK(static_cast<double>(log_gamma(50.0L)) == doctest::Approx(std::lgamma(50.0)).epsilon(1e-15));
  CHECK_THROWS_AS(log_gamma(0.0), domain_error);
  CHECK_THROWS_AS(log_gamma(-1.5), domain_error);
}
