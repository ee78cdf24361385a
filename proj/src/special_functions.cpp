#include "erlq/special_functions.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace erlq {

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw domain_error("log_gamma: argument must be positive and finite, got " + std::to_string(x));
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

long double log_gamma(long double x) {
  if (!(x > 0.0L) || !std::isfinite(x))
    throw domain_error("log_gamma: argument must be positive and finite");
  int sign = 0;
  return ::lgammal_r(x, &sign);
}

namespace {

// log|a_j| for a_j = x^j (g)_j / (j! Gamma(a j + b)), x != 0.
long double log_term(const MLArgs& p, long double log_abs_x, int j) {
  const long double jj = j;
  return jj * log_abs_x + log_gamma(jj + (long double)p.gamma) - log_gamma((long double)p.gamma) -
         log_gamma(jj + 1.0L) - log_gamma((long double)p.alpha * jj + (long double)p.beta);
}

}  // namespace

EvalResult ml3(const MLArgs& p, double tol, int term_cap) {
  if (!(p.alpha > 0.0) || !(p.beta > 0.0) || !(p.gamma > 0.0))
    throw domain_error("ml3: alpha, beta and gamma must be positive");
  if (!(tol > 0.0)) throw domain_error("ml3: tol must be positive");
  if (!std::isfinite(p.x)) throw domain_error("ml3: x must be finite");

  EvalResult out;
  const long double first = std::exp(-log_gamma((long double)p.beta));
  if (p.x == 0.0) {
    out.value = (double)first;
    out.abs_error_bound = std::numeric_limits<long double>::epsilon() * std::fabs((double)first);
    out.terms_used = 1;
    return out;
  }

  constexpr long double eps = std::numeric_limits<long double>::epsilon();
  const long double log_abs_x = std::log(std::fabs((long double)p.x));
  const bool negative = p.x < 0.0;

  long double sum = first;
  long double magnitude = first;
  long double prev_log = std::log(first);
  long double prev_ratio = std::numeric_limits<long double>::infinity();

  for (int j = 1; j < term_cap; ++j) {
    const long double lt = log_term(p, log_abs_x, j);
    const long double abs_term = std::exp(lt);
    const long double term = (negative && (j & 1)) ? -abs_term : abs_term;
    sum += term;
    magnitude += abs_term;

    const long double ratio = std::exp(lt - prev_log);
    const long double next_ratio = std::exp(log_term(p, log_abs_x, j + 1) - lt);
    prev_log = lt;

    // Once the ratio is below one and no longer increasing, the tail is
    // dominated by a geometric series with that ratio.
    const bool tail_shrinking = next_ratio < 1.0L && next_ratio <= ratio && ratio <= prev_ratio;
    prev_ratio = ratio;
    const long double scale = std::max(1.0L, std::fabs(sum));
    if (tail_shrinking && abs_term < tol * scale) {
      const long double tail = abs_term * next_ratio / (1.0L - next_ratio);
      const long double rounding = 4.0L * eps * magnitude * std::sqrt((long double)(j + 1));
      out.value = (double)sum;
      out.abs_error_bound = (double)(tail + rounding) +
                            std::numeric_limits<double>::epsilon() * std::fabs((double)sum);
      out.terms_used = j + 1;
      out.status = out.abs_error_bound <= tol ? Status::converged : Status::unconverged;
      return out;
    }
  }
  out.value = (double)sum;
  out.abs_error_bound = std::numeric_limits<double>::infinity();
  out.terms_used = term_cap;
  out.status = Status::unconverged;
  return out;
}

EvalResult ml2(double alpha, double beta, double x, double tol, int term_cap) {
  return ml3(MLArgs{alpha, beta, 1.0, x}, tol, term_cap);
}

}  // namespace erlq
