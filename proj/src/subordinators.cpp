#include "erlq/subordinators.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace erlq {

void TemperedStableParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw domain_error("tempered stable: alpha must lie in (0,1)");
  if (!(theta >= 0.0) || !std::isfinite(theta))
    throw domain_error("tempered stable: theta must be finite and nonnegative");
}

void GammaParams::validate() const {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw domain_error("gamma subordinator: a and b must be positive");
}

double InversePath::at(double t) const {
  if (t < 0.0) return 0.0;
  auto it = std::upper_bound(crossings.begin(), crossings.end(), t);
  const auto i = static_cast<long>(it - crossings.begin()) - 1;
  return step * static_cast<double>(std::max(0L, i));
}

double laplace_exponent(const TemperedStableParams& p, double s) {
  p.validate();
  if (!(s >= 0.0)) throw domain_error("laplace_exponent: s must be nonnegative");
  return std::pow(s + p.theta, p.alpha) - std::pow(p.theta, p.alpha);
}

double sample_stable_increment(double alpha, double dt, Rng& rng) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw domain_error("stable increment: alpha must lie in (0,1)");
  if (!(dt > 0.0)) throw domain_error("stable increment: dt must be positive");
  const double u = std::numbers::pi * uniform_open(rng);
  const double e = -std::log(uniform_open(rng));
  const double x = std::sin(alpha * u) / std::pow(std::sin(u), 1.0 / alpha) *
                   std::pow(std::sin((1.0 - alpha) * u) / e, (1.0 - alpha) / alpha);
  return std::pow(dt, 1.0 / alpha) * x;
}

double sample_tempered_stable_increment(const TemperedStableParams& p, double dt, Rng& rng) {
  p.validate();
  if (!(dt > 0.0)) throw domain_error("tempered stable increment: dt must be positive");
  if (p.theta == 0.0) return sample_stable_increment(p.alpha, dt, rng);

  const int pieces = std::max(1, static_cast<int>(std::ceil(dt * std::pow(p.theta, p.alpha))));
  const double piece = dt / pieces;
  constexpr int retry_cap = 1000000;
  double total = 0.0;
  for (int i = 0; i < pieces; ++i) {
    int tries = 0;
    for (;;) {
      const double x = sample_stable_increment(p.alpha, piece, rng);
      if (uniform_open(rng) <= std::exp(-p.theta * x)) {
        total += x;
        break;
      }
      if (++tries == retry_cap)
        throw std::runtime_error("tempered stable increment: no acceptance after " +
                                 std::to_string(retry_cap) + " proposals (theta=" +
                                 std::to_string(p.theta) + ", alpha=" + std::to_string(p.alpha) +
                                 ", dt=" + std::to_string(piece) + ")");
    }
  }
  return total;
}

double sample_gamma_increment(const GammaParams& p, double dt, Rng& rng) {
  p.validate();
  if (!(dt > 0.0)) throw domain_error("gamma increment: dt must be positive");
  std::gamma_distribution<double> g(p.a * dt, 1.0 / p.b);
  return g(rng);
}

namespace {

template <class Draw>
InversePath build_inverse(double horizon, double step, Draw draw) {
  if (!(horizon > 0.0)) throw domain_error("inverse path: horizon must be positive");
  if (!(step > 0.0)) throw domain_error("inverse path: step must be positive");
  InversePath path;
  path.horizon = horizon;
  path.step = step;
  path.crossings.push_back(0.0);
  double d = 0.0;
  while (d <= horizon) {
    d += draw();
    path.crossings.push_back(d);
  }
  return path;
}

}  // namespace

InversePath inverse_path(const TemperedStableParams& p, double horizon, double step, Rng& rng) {
  p.validate();
  return build_inverse(horizon, step,
                       [&] { return sample_tempered_stable_increment(p, step, rng); });
}

InversePath gamma_inverse_path(const GammaParams& p, double horizon, double step, Rng& rng) {
  p.validate();
  return build_inverse(horizon, step, [&] { return sample_gamma_increment(p, step, rng); });
}

InversePath coarsen(const InversePath& fine) {
  InversePath out;
  out.horizon = fine.horizon;
  out.step = 2.0 * fine.step;
  for (std::size_t i = 0; i < fine.crossings.size(); i += 2) out.crossings.push_back(fine.crossings[i]);
  if (out.crossings.back() <= fine.horizon) out.crossings.push_back(fine.crossings.back());
  return out;
}

double gamma_density(const GammaParams& p, double x, double t) {
  p.validate();
  if (!(x > 0.0) || !(t > 0.0)) throw domain_error("gamma_density: x and t must be positive");
  const double shape = p.a * t;
  return std::exp(shape * std::log(p.b) - log_gamma(shape) + (shape - 1.0) * std::log(x) - p.b * x);
}

namespace {

// Taylor coefficients of e^{-tau y} / (1 + y) about y = 0.
std::vector<double> phi_coefficients(double tau, int count) {
  std::vector<double> out(count);
  double exp_coef = 1.0;  // (-tau)^i / i!
  double acc = 0.0;
  for (int j = 0; j < count; ++j) {
    if (j > 0) exp_coef *= -tau / j;
    acc = exp_coef - acc;  // c_j = e_j - c_{j-1}
    out[j] = acc;
  }
  return out;
}

}  // namespace

EvalResult inverse_gamma_density(const GammaParams& p, double x, double t, InverseGammaForm form,
                                 double tol) {
  p.validate();
  if (!(x > 0.0) || !(t > 0.0)) throw domain_error("inverse_gamma_density: x and t must be positive");
  const double s = p.a * x;
  if (std::fabs(s - std::round(s)) <= 1e-12 * std::max(1.0, s))
    throw domain_error("inverse_gamma_density: a*x must not be a positive integer (a*x = " +
                       std::to_string(s) + ")");
  using std::numbers::pi;
  const double tau = form == InverseGammaForm::printed ? t : p.b * t;
  const double constant = p.a * (form == InverseGammaForm::printed ? std::exp(-1.0) : std::exp(-p.b * t)) / pi;
  const double cs = pi * std::cos(pi * s);
  const double sn = std::sin(pi * s);

  // Near zero, subtract the Taylor polynomial of degree floor(s) and add
  // back its moments in closed form.
  const int degree = static_cast<int>(std::floor(s));
  const int n_coef = degree + 80;
  const std::vector<double> phi = phi_coefficients(tau, n_coef);
  // y^{-s} times the remainder, kept finite for tiny y.
  auto scaled_remainder = [&](double y, double ly) {
    if (y <= 0.5) {
      double r = 0.0;
      for (int j = degree + 1; j < n_coef; ++j) {
        const double term = phi[j] * std::exp((j - s) * ly);
        r += term;
        if (std::fabs(term) < 1e-19 * std::fabs(r) && j > degree + 8) break;
      }
      return r;
    }
    double poly = 0.0;
    for (int j = degree; j >= 0; --j) poly = poly * y + phi[j];
    return std::exp(-s * ly) * (std::exp(-tau * y) / (1.0 + y) - poly);
  };
  auto near = [&](double y) {
    if (y <= 0.0) return 0.0;
    const double ly = std::log(y);
    return scaled_remainder(y, ly) * (cs - ly * sn);
  };
  auto far = [&](double y) {
    if (!std::isfinite(y)) return 0.0;
    const double ly = std::log(y);
    return std::exp(-s * ly - tau * y) / (1.0 + y) * (cs - ly * sn);
  };

  double err_near = 0.0, err_far = 0.0, l1_near = 0.0, l1_far = 0.0;
  boost::math::quadrature::tanh_sinh<double> ts;
  std::size_t levels = 0;
  const double i_near = ts.integrate(near, 0.0, 1.0, tol * 1e-2, &err_near, &l1_near, &levels);
  const double i_far = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      far, 1.0, std::numeric_limits<double>::infinity(), 15, tol * 1e-2, &err_far, &l1_far);

  double moments = 0.0;
  for (int j = 0; j <= degree; ++j) {
    const double nu = j - s + 1.0;
    moments += phi[j] * (cs / nu + sn / (nu * nu));
  }

  EvalResult out;
  const double total = i_near + i_far + moments;
  out.value = constant * total;
  out.abs_error_bound =
      constant * (err_near + err_far + 64.0 * std::numeric_limits<double>::epsilon() * (l1_near + l1_far + std::fabs(moments)));
  out.terms_used = static_cast<int>(levels) + 1;
  out.status = out.abs_error_bound <= std::max(tol, tol * std::fabs(out.value)) ? Status::converged
                                                                               : Status::unconverged;
  return out;
}

}  // namespace erlq
