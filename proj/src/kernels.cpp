#include "erlq/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "erlq/special_functions.hpp"

namespace erlq {

namespace {
constexpr long double eps_ld = std::numeric_limits<long double>::epsilon();
constexpr long double series_floor = 1e-24L;
enum Kind { kind_g = 0, kind_h = 1, kind_g_tilde = 2 };
}  // namespace

KernelTable::KernelTable(double alpha, double theta, double omega, double t, int term_cap)
    : alpha_(alpha), theta_(theta), omega_(omega), t_(t), term_cap_(term_cap) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw domain_error("KernelTable: alpha must lie in (0,1]");
  if (!(theta >= 0.0)) throw domain_error("KernelTable: theta must be nonnegative");
  if (!(t >= 0.0) || !std::isfinite(t)) throw domain_error("KernelTable: t must be nonnegative");
  theta_alpha_ = theta == 0.0 ? 0.0L : std::pow((long double)theta, (long double)alpha);
}

long double KernelTable::compute_K(int n, bool free) const {
  if (n == 0 && !free) return 1.0L;
  if (t_ == 0.0) return n == 0 ? 1.0L : 0.0L;
  const long double t = t_, th = theta_, a = alpha_;
  const long double x = a * n;
  long double term = std::exp(x * std::log(t) - th * t - log_gamma(x + 1.0L));
  if (th == 0.0L && !free) return term;
  const long double growth = free ? t : th * t;
  long double sum = term;
  for (int m = 1; m < term_cap_; ++m) {
    term *= growth / (x + m);
    sum += term;
    if (m > growth && term < series_floor * sum) break;
  }
  return sum;
}

long double KernelTable::K(int n) {
  while ((int)k_.size() <= n) k_.push_back(compute_K((int)k_.size(), false));
  return k_[n];
}

long double KernelTable::K_free(int n) {
  while ((int)k_free_.size() <= n) k_free_.push_back(compute_K((int)k_free_.size(), true));
  return k_free_[n];
}

KernelTable::Value KernelTable::series(int order, int kind) {
  Value out;
  const long double w = omega_;
  long double coef = 1.0L;  // (order)_j omega^j / j!
  long double sum = 0.0L, magnitude = 0.0L, peak = 0.0L, prev = 0.0L;
  for (int j = 0; j < term_cap_; ++j) {
    long double base;
    switch (kind) {
      case kind_g: base = K(order - 1 + j) - theta_alpha_ * K(order + j); break;
      case kind_h: base = K(order + j); break;
      default: base = theta_alpha_ * (K_free(order - 1 + j) - theta_alpha_ * K_free(order + j)); break;
    }
    const long double term = coef * base;
    sum += term;
    magnitude += std::fabs(term);
    peak = std::max(peak, std::fabs(term));
    const bool falling = std::fabs(term) <= prev;
    prev = std::fabs(term);
    if (order == 0 || w == 0.0L || t_ == 0.0) break;
    if (j > 1 && falling && std::fabs(term) <= series_floor * peak) {
      out.err = 2.0L * std::fabs(term);
      break;
    }
    coef *= w * (order + j) / (j + 1);
    if (j + 1 == term_cap_) out.err = std::numeric_limits<long double>::infinity();
  }
  out.value = sum;
  out.err += 16.0L * eps_ld * magnitude + 4.0L * eps_ld * std::fabs(sum);
  return out;
}

const KernelTable::Value& KernelTable::G(int order) {
  if (order < 1) throw domain_error("KernelTable::G: order must be at least 1");
  if ((int)g_.size() <= order) {
    g_.resize(order + 1);
    g_done_.resize(order + 1, 0);
  }
  if (!g_done_[order]) {
    g_[order] = series(order, kind_g);
    g_done_[order] = 1;
  }
  return g_[order];
}

const KernelTable::Value& KernelTable::H(int order) {
  if (order < 0) throw domain_error("KernelTable::H: order must be nonnegative");
  if ((int)h_.size() <= order) {
    h_.resize(order + 1);
    h_done_.resize(order + 1, 0);
  }
  if (!h_done_[order]) {
    h_[order] = series(order, kind_h);
    h_done_[order] = 1;
  }
  return h_[order];
}

const KernelTable::Value& KernelTable::G_tilde(int order) {
  if (order < 1) throw domain_error("KernelTable::G_tilde: order must be at least 1");
  if ((int)g_tilde_.size() <= order) {
    g_tilde_.resize(order + 1);
    g_tilde_done_.resize(order + 1, 0);
  }
  if (!g_tilde_done_[order]) {
    g_tilde_[order] = series(order, kind_g_tilde);
    g_tilde_done_[order] = 1;
  }
  return g_tilde_[order];
}

namespace {

double ml_or_reciprocal(double alpha, double b, int order, double x, double tol) {
  if (order == 0) return std::exp(-log_gamma(b));
  const EvalResult r = ml3(MLArgs{alpha, b, (double)order, x}, tol);
  return r.value;
}

template <class Term>
double outer_sum(double theta, double t, Term term) {
  double sum = 0.0;
  for (int m = 0; m < 10000; ++m) {
    const double v = term(m);
    sum += v;
    if (theta == 0.0) break;
    if (m > theta * t && std::fabs(v) <= 1e-17 * std::max(1.0, std::fabs(sum))) break;
  }
  return std::exp(-theta * t) * sum;
}

}  // namespace

double kernel_G_direct(double alpha, double theta, double omega, int order, double t, double tol) {
  if (order < 1) throw domain_error("kernel_G_direct: order must be at least 1");
  if (t == 0.0) return order == 1 ? 1.0 : 0.0;
  const double b = alpha * (order - 1) + 1.0;
  const double x = omega * std::pow(t, alpha);
  const double tt = std::pow(theta * t, alpha);
  return outer_sum(theta, t, [&](int m) {
    const double p = std::pow(theta, m) * std::pow(t, b + m - 1.0);
    return p * (ml_or_reciprocal(alpha, b + m, order, x, tol) -
                tt * ml_or_reciprocal(alpha, b + alpha + m, order, x, tol));
  });
}

double kernel_H_direct(double alpha, double theta, double omega, int order, double t, double tol) {
  if (order < 0) throw domain_error("kernel_H_direct: order must be nonnegative");
  if (t == 0.0) return order == 0 ? 1.0 : 0.0;
  const double x = omega * std::pow(t, alpha);
  return outer_sum(theta, t, [&](int m) {
    const double b = alpha * order + m + 1.0;
    return std::pow(theta, m) * std::pow(t, alpha * order + m) * ml_or_reciprocal(alpha, b, order, x, tol);
  });
}

}  // namespace erlq
