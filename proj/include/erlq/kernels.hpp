#pragma once

#include <vector>

namespace erlq {

// Tempered Mittag-Leffler kernels at one time point t, for the parameters
// (alpha, theta) and the argument coefficient omega:
//
//   G_g(t) = e^{-theta t} sum_m theta^m t^{b+m-1} [E^g_{alpha,b+m}(omega t^alpha)
//              - (theta t)^alpha E^g_{alpha,b+alpha+m}(omega t^alpha)],  b = alpha(g-1)+1
//   H_g(t) = e^{-theta t} sum_m theta^m t^{alpha g+m} E^g_{alpha,alpha g+m+1}(omega t^alpha)
//
// with Laplace transforms psi(z)/(z ((z+theta)^alpha - omega)^g) and
// 1/(z ((z+theta)^alpha - omega)^g). Both are evaluated by exchanging the
// order of summation, which leaves a single alternating series over
//   K(N) = e^{-theta t} sum_m theta^m t^{alpha N+m} / Gamma(alpha N+m+1).
// G_tilde_g is G_g with the powers theta^m replaced by a single factor theta^alpha.
class KernelTable {
 public:
  struct Value {
    long double value = 0.0L;
    long double err = 0.0L;  // rounding plus truncation bound
  };

  KernelTable(double alpha, double theta, double omega, double t, int term_cap = 20000);

  double t() const { return t_; }
  double omega() const { return omega_; }

  const Value& G(int order);
  const Value& H(int order);
  const Value& G_tilde(int order);

  // K(N) and its theta-free variant, exposed for tests
  long double K(int n);
  long double K_free(int n);

 private:
  long double compute_K(int n, bool free) const;
  Value series(int order, int kind);

  double alpha_, theta_, omega_, t_;
  int term_cap_;
  long double theta_alpha_;
  std::vector<long double> k_, k_free_;
  std::vector<Value> g_, h_, g_tilde_;
  std::vector<char> g_done_, h_done_, g_tilde_done_;
};

// Literal evaluation of G_g and H_g from the three-parameter Mittag-Leffler
// function, one term of the outer m-sum at a time. Slow; used to cross-check.
double kernel_G_direct(double alpha, double theta, double omega, int order, double t,
                       double tol = 1e-14);
double kernel_H_direct(double alpha, double theta, double omega, int order, double t,
                       double tol = 1e-14);

}  // namespace erlq
