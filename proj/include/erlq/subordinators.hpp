#pragma once

#include <vector>

#include "erlq/rng.hpp"
#include "erlq/special_functions.hpp"

namespace erlq {

// Tempered stable subordinator with Laplace exponent (s+theta)^alpha - theta^alpha.
struct TemperedStableParams {
  double theta = 0.0;
  double alpha = 0.5;
  void validate() const;
};

// Gamma subordinator: G(t) ~ Gamma(shape a*t, rate b).
struct GammaParams {
  double a = 1.0;
  double b = 1.0;
  void validate() const;
};

// Right-continuous inverse of a subordinator simulated on an operational grid
// {0, step, 2 step, ...}. crossings[i] is the subordinator at operational time
// i*step; the last entry is the first one beyond the horizon.
struct InversePath {
  double horizon = 0.0;
  double step = 0.0;
  std::vector<double> crossings;

  // Y(t) = step * max{i : crossings[i] <= t}, the grid point before the crossing.
  double at(double t) const;
  // Operational span actually covered, i.e. Y(horizon).
  double operational_span() const { return at(horizon); }
};

double laplace_exponent(const TemperedStableParams& p, double s);

// One-sided alpha-stable increment over operational length dt, with
// E exp(-s X) = exp(-dt s^alpha). Chambers-Mallows-Stuck construction.
double sample_stable_increment(double alpha, double dt, Rng& rng);

// Exponentially tilted stable increment by rejection. Long intervals are
// split so that every piece is accepted with probability at least 1/e.
double sample_tempered_stable_increment(const TemperedStableParams& p, double dt, Rng& rng);

double sample_gamma_increment(const GammaParams& p, double dt, Rng& rng);

InversePath inverse_path(const TemperedStableParams& p, double horizon, double step, Rng& rng);
InversePath gamma_inverse_path(const GammaParams& p, double horizon, double step, Rng& rng);

// Path on a grid of twice the step, sharing the randomness of `fine`.
InversePath coarsen(const InversePath& fine);

double gamma_density(const GammaParams& p, double x, double t);

// Constant and exponential factor of the oscillatory integral representation
// of the inverse gamma density. `printed` uses a e^{-1}/pi with e^{-y t};
// `time_scaled` uses a e^{-b t}/pi with e^{-y b t}. They coincide for b = t = 1.
enum class InverseGammaForm { printed, time_scaled };

// Divergent pieces of the integral near y = 0 (a x > 1) are taken in the
// sense of analytic continuation in a x.
EvalResult inverse_gamma_density(const GammaParams& p, double x, double t,
                                 InverseGammaForm form = InverseGammaForm::printed,
                                 double tol = 1e-10);

}  // namespace erlq
