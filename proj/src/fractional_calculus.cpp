#include "erlq/fractional_calculus.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

namespace erlq {

SampledFunction SampledFunction::sample(const std::vector<double>& grid,
                                        const std::function<double(double)>& f) {
  SampledFunction out;
  out.grid = grid;
  out.values.reserve(grid.size());
  for (double t : grid) out.values.push_back(f(t));
  out.f0 = out.values.empty() ? 0.0 : out.values.front();
  out.validate();
  return out;
}

void SampledFunction::validate() const {
  if (grid.size() < 3) throw domain_error("SampledFunction: need at least three grid points");
  if (grid.front() != 0.0) throw domain_error("SampledFunction: grid must start at 0");
  if (values.size() != grid.size()) throw domain_error("SampledFunction: one value per grid point");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw domain_error("SampledFunction: grid must be strictly increasing");
}

std::vector<double> uniform_grid(double t_max, int points) {
  if (points < 2 || !(t_max > 0.0)) throw domain_error("uniform_grid: need t_max > 0 and two points");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = t_max * i / (points - 1);
  return g;
}

void FracParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw domain_error("FracParams: alpha must lie in (0,1)");
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw domain_error("FracParams: theta must be nonnegative");
}

double caputo_tail(const FracParams& p, double t) {
  p.validate();
  if (!(t > 0.0)) throw domain_error("caputo_tail: t must be positive");
  const double power = std::pow(t, -p.alpha);
  if (p.theta == 0.0) return power;
  const double upper = std::tgamma(1.0 - p.alpha) * boost::math::gamma_q(1.0 - p.alpha, p.theta * t);
  return std::exp(-p.theta * t) * power - std::pow(p.theta, p.alpha) * upper;
}

namespace {

// Classical Caputo derivative of the piecewise-linear interpolant of g,
// using the grid points listed in idx (idx.front() = 0, idx.back() = target).
double l1_caputo(const std::vector<double>& grid, const std::vector<double>& g,
                 const std::vector<std::size_t>& idx, double alpha) {
  const double t = grid[idx.back()];
  const double e = 1.0 - alpha;
  double acc = 0.0;
  for (std::size_t m = 0; m + 1 < idx.size(); ++m) {
    const double a = grid[idx[m]], b = grid[idx[m + 1]];
    const double slope = (g[idx[m + 1]] - g[idx[m]]) / (b - a);
    acc += slope * (std::pow(t - a, e) - std::pow(t - b, e));
  }
  return acc / std::tgamma(2.0 - alpha);
}

std::size_t locate(const SampledFunction& f, double t) {
  f.validate();
  for (std::size_t i = 1; i + 1 < f.grid.size(); ++i) {
    const double tol = 1e-12 * std::max(1.0, std::fabs(t));
    if (std::fabs(f.grid[i] - t) <= tol) return i;
  }
  // the last point is accepted too; it has no right neighbour but the
  // derivative only needs the past
  if (std::fabs(f.grid.back() - t) <= 1e-12 * std::max(1.0, std::fabs(t))) return f.grid.size() - 1;
  throw domain_error("fractional derivative: t must be a positive grid point");
}

std::vector<double> tilted(const SampledFunction& f, double theta) {
  std::vector<double> g(f.values.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::exp(theta * f.grid[i]) * f.values[i];
  return g;
}

// Tempered RL derivative with the L1 sum restricted to idx.
double rl_on(const SampledFunction& f, const std::vector<double>& g, const FracParams& p,
             const std::vector<std::size_t>& idx) {
  const double t = f.grid[idx.back()];
  const double caputo = l1_caputo(f.grid, g, idx, p.alpha);
  const double rl = caputo + g[0] * std::pow(t, -p.alpha) / std::tgamma(1.0 - p.alpha);
  return std::exp(-p.theta * t) * rl - std::pow(p.theta, p.alpha) * f.values[idx.back()];
}

EvalResult with_halving(const SampledFunction& f, const FracParams& p, double t, double tol,
                        double shift) {
  p.validate();
  const std::size_t i = locate(f, t);
  std::vector<std::size_t> fine(i + 1), coarse;
  for (std::size_t j = 0; j <= i; ++j) fine[j] = j;
  // every other point counted back from the target; keeps 0 as first node
  for (std::size_t j = i;; j -= 2) {
    coarse.insert(coarse.begin(), j);
    if (j < 2) break;
  }
  if (coarse.front() != 0) coarse.insert(coarse.begin(), 0);
  const std::vector<double> g = tilted(f, p.theta);
  const double v_fine = rl_on(f, g, p, fine) - shift;
  const double v_coarse = rl_on(f, g, p, coarse) - shift;
  EvalResult out;
  out.value = v_fine;
  out.abs_error_bound = std::fabs(v_fine - v_coarse) / (std::pow(2.0, 2.0 - p.alpha) - 1.0);
  out.terms_used = static_cast<int>(i + 1);
  out.status = out.abs_error_bound <= tol ? Status::converged : Status::unconverged;
  return out;
}

}  // namespace

EvalResult rl_tempered_derivative(const SampledFunction& f, const FracParams& p, double t, double tol) {
  return with_halving(f, p, t, tol, 0.0);
}

EvalResult caputo_tempered_derivative(const SampledFunction& f, const FracParams& p, double t,
                                      double tol) {
  const double shift = f.f0 / std::tgamma(1.0 - p.alpha) * caputo_tail(p, t);
  return with_halving(f, p, t, tol, shift);
}

std::vector<double> caputo_tempered_derivative_all(const SampledFunction& f, const FracParams& p) {
  p.validate();
  f.validate();
  const std::vector<double> g = tilted(f, p.theta);
  std::vector<double> out(f.grid.size(), 0.0);
  std::vector<std::size_t> idx{0};
  for (std::size_t i = 1; i < f.grid.size(); ++i) {
    idx.push_back(i);
    const double t = f.grid[i];
    out[i] = rl_on(f, g, p, idx) - f.f0 / std::tgamma(1.0 - p.alpha) * caputo_tail(p, t);
  }
  return out;
}

EvalResult numerical_laplace(const SampledFunction& f, double s, double tail_bound, double tol) {
  f.validate();
  if (!(s > 0.0)) throw domain_error("numerical_laplace: s must be positive");
  if (!(tail_bound >= 0.0)) throw domain_error("numerical_laplace: tail bound must be nonnegative");
  // exact integral of the linear interpolant against e^{-s t} per panel
  auto integrate = [&](std::size_t stride) {
    double acc = 0.0;
    const std::size_t n = f.grid.size();
    std::size_t a = 0;
    while (a + 1 < n) {
      const std::size_t b = std::min(a + stride, n - 1);
      const double t0 = f.grid[a], t1 = f.grid[b], h = t1 - t0;
      const double f0 = f.values[a], f1 = f.values[b];
      const double e0 = std::exp(-s * t0), e1 = std::exp(-s * t1);
      // int_0^h (f0 + (f1-f0) u/h) e^{-s(t0+u)} du
      const double base = (e0 - e1) / s;
      const double ramp = (e0 - e1) / (s * s * h) - e1 / s;
      acc += f0 * base + (f1 - f0) * ramp;
      a = b;
    }
    return acc;
  };
  const double fine = integrate(1);
  const double coarse = integrate(2);
  EvalResult out;
  out.value = fine;
  out.abs_error_bound = std::fabs(fine - coarse) / 3.0 + tail_bound;
  out.terms_used = static_cast<int>(f.grid.size());
  out.status = out.abs_error_bound <= tol ? Status::converged : Status::unconverged;
  return out;
}

EvalResult numerical_laplace(const std::function<double(double)>& f, double s, double tol) {
  if (!(s > 0.0)) throw domain_error("numerical_laplace: s must be positive");
  boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0.0, l1 = 0.0;
  std::size_t levels = 0;
  const double v = integrator.integrate([&](double t) { return f(t) * std::exp(-s * t); }, 0.0,
                                        std::numeric_limits<double>::infinity(), tol * 1e-2, &err,
                                        &l1, &levels);
  EvalResult out;
  out.value = v;
  out.abs_error_bound = err + 16.0 * std::numeric_limits<double>::epsilon() * l1;
  out.terms_used = static_cast<int>(levels);
  out.status = out.abs_error_bound <= tol ? Status::converged : Status::unconverged;
  return out;
}

}  // namespace erlq
