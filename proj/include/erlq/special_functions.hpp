#pragma once

#include <stdexcept>

namespace erlq {

// Thrown for parameters outside an operation's domain.
class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Status { converged, unconverged };

inline const char* to_string(Status s) {
  return s == Status::converged ? "converged" : "unconverged";
}

struct MLArgs {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double x = 0.0;
};

struct EvalResult {
  double value = 0.0;
  double abs_error_bound = 0.0;
  int terms_used = 0;
  Status status = Status::converged;

  bool converged() const { return status == Status::converged; }
};

constexpr int default_term_cap = 10000;

// Three-parameter Mittag-Leffler function
//   E^g_{a,b}(x) = sum_j x^j (g)_j / (j! Gamma(a j + b)).
// The bound covers the geometric tail estimate and accumulated rounding.
EvalResult ml3(const MLArgs& args, double tol, int term_cap = default_term_cap);

// Two-parameter function E_{a,b}(x) = E^1_{a,b}(x).
EvalResult ml2(double alpha, double beta, double x, double tol,
               int term_cap = default_term_cap);

// ln Gamma(x) for x > 0. Reentrant.
double log_gamma(double x);
long double log_gamma(long double x);

}  // namespace erlq
