#pragma once

#include <functional>
#include <vector>

#include "erlq/special_functions.hpp"

namespace erlq {

struct SampledFunction {
  std::vector<double> grid;  // strictly increasing, grid[0] = 0
  std::vector<double> values;
  double f0 = 0.0;

  static SampledFunction sample(const std::vector<double>& grid, const std::function<double(double)>& f);
  void validate() const;
};

std::vector<double> uniform_grid(double t_max, int points);

struct FracParams {
  double theta = 0.0;
  double alpha = 0.5;
  void validate() const;
};

// Tempered derivatives at a grid point t. The result carries a grid-halving
// error estimate; it is flagged unconverged when that estimate exceeds tol.
EvalResult rl_tempered_derivative(const SampledFunction& f, const FracParams& p, double t,
                                  double tol = 1e-3);
EvalResult caputo_tempered_derivative(const SampledFunction& f, const FracParams& p, double t,
                                      double tol = 1e-3);

// Caputo tempered derivative at every grid point (value only; entry 0 is 0).
std::vector<double> caputo_tempered_derivative_all(const SampledFunction& f, const FracParams& p);

// alpha * int_t^inf e^{-theta s} s^{-alpha-1} ds
double caputo_tail(const FracParams& p, double t);

// int_0^inf f(t) e^{-s t} dt for the piecewise-linear interpolant of f on its
// grid. The caller bounds the part beyond the last grid point by tail_bound.
EvalResult numerical_laplace(const SampledFunction& f, double s, double tail_bound,
                             double tol = 1e-6);

// Same transform for a callable, by double-exponential quadrature on [0, inf).
EvalResult numerical_laplace(const std::function<double(double)>& f, double s, double tol = 1e-10);

}  // namespace erlq
