#include "erlq/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace erlq {

namespace {

constexpr long double eps_ld = std::numeric_limits<long double>::epsilon();
constexpr long double neg_inf = -std::numeric_limits<long double>::infinity();

long double lfact(long n) { return log_gamma((long double)n + 1.0L); }

// log of Lambda^{|m|} prod_i c_i^{m_i} / m_i!
long double log_composition_weight(const QueueParams& qp, const std::vector<int>& m) {
  long double acc = 0.0L;
  const long double lL = std::log((long double)qp.Lambda());
  for (int i = 1; i <= qp.l(); ++i) {
    const int mi = m[i - 1];
    if (mi == 0) continue;
    const long double ci = qp.c(i);
    if (ci == 0.0L) return neg_inf;
    acc += mi * (lL + std::log(ci)) - lfact(mi);
  }
  return acc;
}

int size_of(const std::vector<int>& m) { return std::accumulate(m.begin(), m.end(), 0); }

int weight_of(const std::vector<int>& m) {
  int w = 0;
  for (std::size_t j = 0; j < m.size(); ++j) w += static_cast<int>(j + 1) * m[j];
  return w;
}

}  // namespace

const char* to_string(ThetaPowerReading r) { return r == ThetaPowerReading::alpha ? "alpha" : "a"; }
const char* to_string(FinalPhaseRule r) { return r == FinalPhaseRule::complete ? "complete" : "shifted"; }

void SeriesConfig::validate() const {
  if (order_cap < 1 || term_cap < 1 || composition_cap < 1 || shell_patience < 1)
    throw domain_error("SeriesConfig: every cap must be at least 1");
  if (!(tol > 0.0)) throw domain_error("SeriesConfig: tol must be positive");
  if (!std::isfinite(beta_shift)) throw domain_error("SeriesConfig: beta_shift must be finite");
}

double SeriesContext::beta_const() const {
  return std::pow(tp.theta, tp.alpha) - qp.Lambda() - qp.k * qp.mu + cfg.beta_shift;
}

void SeriesContext::validate() const {
  qp.validate();
  if (!(tp.alpha > 0.0 && tp.alpha <= 1.0)) throw domain_error("SeriesContext: alpha must lie in (0,1]");
  if (!(tp.theta >= 0.0) || !std::isfinite(tp.theta)) throw domain_error("SeriesContext: theta must be nonnegative");
  cfg.validate();
}

// ---- coefficient ledger -------------------------------------------------------

CoefficientSet coefficients(const SeriesContext& ctx, const IndexTuple& idx) {
  ctx.validate();
  const QueueParams& qp = ctx.qp;
  const int l = qp.l(), k = qp.k;
  if (static_cast<int>(idx.m.size()) != l || static_cast<int>(idx.m_prime.size()) != l)
    throw domain_error("coefficients: compositions must have l entries");
  for (int v : idx.m) if (v < 0) throw domain_error("coefficients: negative composition entry");
  for (int v : idx.m_prime) if (v < 0) throw domain_error("coefficients: negative composition entry");
  if (idx.s < 1 || idx.s > k) throw domain_error("coefficients: s must lie in 1..k");
  if (idx.h < 1 || idx.r < 0 || idx.w < 0 || idx.n < 0) throw domain_error("coefficients: index out of range");
  if (weight_of(idx.m) - idx.r != idx.n) throw domain_error("coefficients: sum_j j m_j - r must equal n");
  if (size_of(idx.m_prime) != idx.w) throw domain_error("coefficients: sum_j m'_j must equal w");

  const double alpha = ctx.tp.alpha;
  const long double lkmu = std::log((long double)k * qp.mu);
  CoefficientSet out;
  const int size_m = size_of(idx.m);
  const int r = idx.r, s = idx.s;

  out.a = size_m + k * (r + 1) - s + 1;
  out.pi = alpha * (out.a - 1) + 1.0;

  out.gamma0 = idx.h + idx.w + k * weight_of(idx.m_prime);
  out.log_C0 = (double)(std::log((long double)idx.h) + log_composition_weight(qp, idx.m_prime) +
                        (out.gamma0 - idx.w - 1) * lkmu + lfact(out.gamma0 - 1) - lfact(out.gamma0 - idx.w));
  out.beta0 = alpha * (out.gamma0 - 1) + 1.0;
  out.betaM = alpha * out.gamma0 + 1.0;

  auto log_A = [&](const std::vector<int>& mm, int phase) {
    const int a = size_of(mm) + k * (r + 1) - phase + 1;
    const int e = k * (r + 1) - phase;
    return log_composition_weight(qp, mm) + e * lkmu - lfact(e) + lfact(a - 1);
  };
  out.log_A = (double)log_A(idx.m, s);
  out.log_B = (double)(lkmu + out.log_A + out.log_C0);
  out.b = out.a + out.gamma0;
  out.rho = alpha * (out.b - 1) + 1.0;
  if (s < k) {
    out.log_C = (double)(lkmu + log_A(idx.m, s + 1) + out.log_C0);
    out.c = out.a - 1 + out.gamma0;
  } else {
    std::vector<int> shifted = idx.m;
    shifted[0] += 1;
    out.log_C = (double)(lkmu + log_A(shifted, 1) + out.log_C0);
    out.c = size_of(shifted) + k * (r + 1) + out.gamma0;
  }
  out.delta = alpha * (out.c - 1) + 1.0;
  return out;
}

// ---- compositions ---------------------------------------------------------------

std::vector<std::vector<int>> compositions_with_weight(int l, int weight) {
  std::vector<std::vector<int>> out;
  enumerate_compositions(l, weight, weight, [&](const std::vector<int>& m) {
    if (weight_of(m) == weight) out.push_back(m);
  });
  return out;
}

CompositionTable composition_table(const QueueParams& qp, int max_order, long cap) {
  qp.validate();
  const int l = qp.l();
  CompositionTable tab;
  tab.max_size = max_order;
  tab.max_weight = l * max_order;
  // (sum_i c_i y^i)^size by repeated multiplication; coefficients stay in [0,1].
  std::vector<long double> base(l + 1, 0.0L);
  for (int i = 1; i <= l; ++i) base[i] = qp.c(i);
  std::vector<long double> power{1.0L};
  const long double lL = std::log((long double)qp.Lambda());
  tab.P.resize(max_order + 1);
  for (int size = 0; size <= max_order; ++size) {
    if (size > 0) {
      std::vector<long double> next(power.size() + l, 0.0L);
      for (std::size_t w = 0; w < power.size(); ++w)
        if (power[w] != 0.0L)
          for (int i = 1; i <= l; ++i) next[w + i] += power[w] * base[i];
      power.swap(next);
    }
    const long double scale = std::exp(size * lL - lfact(size));
    tab.P[size].resize(power.size());
    for (std::size_t w = 0; w < power.size(); ++w) tab.P[size][w] = power[w] * scale;
    tab.visited += static_cast<long>(power.size());
    if (tab.visited > cap) throw std::runtime_error("composition_table: composition cap exceeded");
  }
  return tab;
}

namespace {

// Sums over m + e_1 for the shifted rule, keyed by (|m|, weight of m).
void fill_shifted(const QueueParams& qp, CompositionTable& tab, int max_size, int max_weight) {
  const int l = qp.l();
  const long double lL = std::log((long double)qp.Lambda());
  // R[q][w]: sum over (m_2..m_l), |.| = q, weight w, of prod c_i^{m_i}/m_i!
  std::vector<std::vector<long double>> R(max_size + 1);
  std::vector<long double> base(l + 1, 0.0L);
  for (int i = 2; i <= l; ++i) base[i] = qp.c(i);
  std::vector<long double> power{1.0L};
  for (int q = 0; q <= max_size; ++q) {
    if (q > 0) {
      std::vector<long double> next(power.size() + l, 0.0L);
      for (std::size_t w = 0; w < power.size(); ++w)
        if (power[w] != 0.0L)
          for (int i = 2; i <= l; ++i) next[w + i] += power[w] * base[i];
      power.swap(next);
    }
    R[q].resize(std::min<std::size_t>(power.size(), max_weight + 1));
    const long double inv = std::exp(-lfact(q));
    for (std::size_t w = 0; w < R[q].size(); ++w) R[q][w] = power[w] * inv;
  }
  const long double c1 = qp.c(1);
  tab.shifted.assign(max_size + 1, {});
  for (int size = 0; size <= max_size; ++size) {
    tab.shifted[size].assign(max_weight + 1, 0.0L);
    const long double scale = std::exp((size + 1) * lL);
    for (int m1 = 0; m1 <= size; ++m1) {
      const long double head = c1 == 0.0L ? 0.0L : std::exp((m1 + 1) * std::log(c1) - lfact(m1 + 1));
      const auto& rest = R[size - m1];
      for (std::size_t w2 = 0; w2 < rest.size(); ++w2) {
        const std::size_t w = w2 + m1;
        if (w > static_cast<std::size_t>(max_weight)) break;
        tab.shifted[size][w] += scale * head * rest[w2];
      }
    }
  }
}

long double table_at(const std::vector<std::vector<long double>>& t, int size, int weight) {
  if (size < 0 || size >= static_cast<int>(t.size())) return 0.0L;
  const auto& row = t[size];
  if (weight < 0 || weight >= static_cast<int>(row.size())) return 0.0L;
  return row[weight];
}

}  // namespace

// ---- evaluator -----------------------------------------------------------------

SeriesEvaluator::SeriesEvaluator(SeriesContext ctx) : ctx_(std::move(ctx)) {
  ctx_.validate();
  const int cap = ctx_.cfg.order_cap;
  const int k = ctx_.qp.k;
  comp_ = composition_table(ctx_.qp, cap, ctx_.cfg.composition_cap);
  const long double lkmu = std::log((long double)k * ctx_.qp.mu);
  // sum over w of h P[size][w] with h = g - size - k w, via prefix sums in w
  std::vector<std::vector<long double>> s0(cap + 1), s1(cap + 1);
  for (int size = 0; size <= cap; ++size) {
    const auto& row = comp_.P[size];
    s0[size].resize(row.size());
    s1[size].resize(row.size());
    long double a0 = 0.0L, a1 = 0.0L;
    for (std::size_t w = 0; w < row.size(); ++w) {
      a0 += row[w];
      a1 += w * row[w];
      s0[size][w] = a0;
      s1[size][w] = a1;
    }
  }
  w0_.assign(cap + 1, 0.0L);
  for (int g = 1; g <= cap; ++g) {
    long double acc = 0.0L;
    for (int size = 0; size * (k + 1) <= g - 1; ++size) {
      const int w_max = std::min<int>((g - 1 - size) / k, static_cast<int>(s0[size].size()) - 1);
      const long double inner = (g - size) * s0[size][w_max] - k * s1[size][w_max];
      if (inner <= 0.0L) continue;
      acc += inner * std::exp((g - size - 1) * lkmu + lfact(g - 1) - lfact(g - size));
    }
    w0_[g] = acc;
  }
}

const SeriesEvaluator::StateCoefficients& SeriesEvaluator::state_coefficients(int n, int s) {
  const int k = ctx_.qp.k, l = ctx_.qp.l();
  if (n < 1 || s < 1 || s > k) throw domain_error("state_prob: need n >= 1 and 1 <= s <= k");
  auto key = std::make_pair(n, s);
  auto it = states_.find(key);
  if (it != states_.end()) return it->second;

  const int cap = ctx_.cfg.order_cap;
  const long double kmu = (long double)k * ctx_.qp.mu;
  const long double lkmu = std::log(kmu);
  std::vector<long double> first(cap + 1, 0.0L), corr(cap + 1, 0.0L);

  // first block: m with weight n + r, order a = |m| + k(r+1) - s + 1
  for (int r = 0;; ++r) {
    const int w = n + r;
    const int e = k * (r + 1) - s;
    const int min_size = (w + l - 1) / l;
    if (min_size + e + 1 > cap) break;
    for (int size = min_size; size <= w; ++size) {
      const int a = size + e + 1;
      if (a > cap) break;
      const long double p = table_at(comp_.P, size, w);
      if (p == 0.0L) continue;
      first[a] += p * std::exp(e * lkmu - lfact(e) + lfact(a - 1));
    }
  }
  // correction block
  if (s < k) {
    for (int r = 0;; ++r) {
      const int w = n + r;
      const int e = k * (r + 1) - s - 1;
      const int min_size = (w + l - 1) / l;
      if (min_size + e + 1 > cap) break;
      for (int size = min_size; size <= w; ++size) {
        const int a = size + e + 1;
        if (a > cap) break;
        const long double p = table_at(comp_.P, size, w);
        if (p == 0.0L) continue;
        corr[a] += p * std::exp(e * lkmu - lfact(e) + lfact(a - 1));
      }
    }
  } else if (ctx_.cfg.final_phase == FinalPhaseRule::complete) {
    for (int r = 0;; ++r) {
      const int w = n + r + 1;
      const int e = k * (r + 1) - 1;
      const int min_size = (w + l - 1) / l;
      if (min_size + e + 1 > cap) break;
      for (int size = min_size; size <= w; ++size) {
        const int a = size + e + 1;
        if (a > cap) break;
        const long double p = table_at(comp_.P, size, w);
        if (p == 0.0L) continue;
        corr[a] += p * std::exp(e * lkmu - lfact(e) + lfact(a - 1));
      }
    }
  } else {
    if (comp_.shifted.empty()) fill_shifted(ctx_.qp, comp_, cap, l * cap);
    for (int r = 0;; ++r) {
      const int w = n + r;
      const int e = k * (r + 1) - 1;
      const int min_size = (w + l - 1) / l;
      if (min_size + 1 + e + 1 > cap) break;
      for (int size = min_size; size <= w; ++size) {
        const int a = size + 1 + e + 1;
        if (a > cap) break;
        const long double p = table_at(comp_.shifted, size, w);
        if (p == 0.0L) continue;
        corr[a] += p * std::exp(e * lkmu - lfact(e) + lfact(a - 1));
      }
    }
  }

  StateCoefficients sc;
  sc.first = first;
  sc.rest.assign(cap + 1, 0.0L);
  sc.rest_abs.assign(cap + 1, 0.0L);
  for (int a = 1; a <= cap; ++a) {
    if (first[a] == 0.0L && corr[a] == 0.0L) continue;
    for (int g = a + 1; g <= cap; ++g) {
      const long double plus = kmu * first[a] * w0_[g - a];
      const long double minus = kmu * corr[a] * w0_[g - a];
      sc.rest[g] += plus - minus;
      sc.rest_abs[g] += plus + minus;
    }
  }
  return states_.emplace(key, std::move(sc)).first->second;
}

KernelTable& SeriesEvaluator::table(double t) {
  if (!table_ || table_->t() != t)
    table_ = std::make_unique<KernelTable>(ctx_.tp.alpha, ctx_.tp.theta, ctx_.beta_const(), t,
                                           ctx_.cfg.term_cap);
  return *table_;
}

SeriesValue SeriesEvaluator::contract(const std::vector<long double>* first,
                                      const std::vector<long double>& rest,
                                      const std::vector<long double>* rest_abs, double t, int kind) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw domain_error("series evaluation: t must be nonnegative");
  KernelTable& tab = table(t);
  const int cap = ctx_.cfg.order_cap;
  const double tol = ctx_.cfg.tol;
  const int patience = ctx_.cfg.shell_patience;
  const bool tilde = first != nullptr && ctx_.cfg.theta_power == ThetaPowerReading::alpha;

  long double sum = 0.0L, rounding = 0.0L, peak = 0.0L, prev_mag = 0.0L;
  std::vector<long double> env;
  int first_active = -1;
  SeriesValue out;
  out.status = Status::unconverged;
  for (int g = 1; g <= cap; ++g) {
    const long double fa = first ? (*first)[g] : 0.0L;
    const long double re = rest[g];
    long double mag = 0.0L;
    if (fa != 0.0L || re != 0.0L) {
      if (first_active < 0) first_active = g;
      const KernelTable::Value& base = kind == 0 ? tab.G(g) : tab.H(g);
      long double shell = re * base.value;
      rounding += std::fabs(re) * base.err +
                  8.0L * eps_ld * (rest_abs ? (*rest_abs)[g] : std::fabs(re)) * std::fabs(base.value);
      mag = std::fabs(re * base.value);
      if (fa != 0.0L) {
        const KernelTable::Value& sel = tilde ? tab.G_tilde(g) : base;
        shell += fa * sel.value;
        rounding += std::fabs(fa) * sel.err + 4.0L * eps_ld * std::fabs(fa * sel.value);
        mag += std::fabs(fa * sel.value);
      }
      sum += shell;
    }
    // envelope over two orders smooths parity gaps in the coefficients
    const long double e = std::max(mag, prev_mag);
    prev_mag = mag;
    env.push_back(e);
    peak = std::max(peak, e);
    out.orders_used = g;
    if (first_active < 0 || g < first_active + patience) continue;
    bool falling = true;
    const int n = static_cast<int>(env.size());
    for (int i = 0; i < patience; ++i)
      if (env[n - 1 - i] > env[n - 2 - i]) falling = false;
    if (falling && e < tol / 10.0 && e <= 1e-3L * peak) {
      const long double before = env[n - 2];
      long double q = before > 0.0L ? e / before : 0.0L;
      q = std::min(q, 0.9L);
      out.err = (double)(e * q / (1.0L - q) + rounding);
      out.status = out.err <= tol ? Status::converged : Status::unconverged;
      out.value = (double)sum;
      return out;
    }
  }
  out.value = (double)sum;
  out.err = std::numeric_limits<double>::infinity();
  return out;
}

SeriesValue SeriesEvaluator::zero_state(double t) { return contract(nullptr, w0_, nullptr, t, 0); }

SeriesValue SeriesEvaluator::state(int n, int s, double t) {
  const StateCoefficients& sc = state_coefficients(n, s);
  SeriesValue v = contract(&sc.first, sc.rest, &sc.rest_abs, t, 0);
  if (v.status == Status::converged && v.value < -v.err - 1e-15)
    throw inconsistency_error("state (" + std::to_string(n) + "," + std::to_string(s) + ") at t=" +
                              std::to_string(t) + " is negative beyond its error bound");
  return v;
}

SeriesValue SeriesEvaluator::phase(long m, double t) {
  const StatePhase sp = phase_inverse(m, ctx_.qp.k);
  return m == 0 ? zero_state(t) : state(sp.n, sp.s, t);
}

SeriesValue SeriesEvaluator::mean(double t) {
  const QueueParams& qp = ctx_.qp;
  const double drift = qp.k * (qp.Lambda() * qp.mean_batch() - qp.mu);
  const double omega = std::pow(ctx_.tp.theta, ctx_.tp.alpha);
  if (!mean_table_ || mean_table_->t() != t)
    mean_table_ = std::make_unique<KernelTable>(ctx_.tp.alpha, ctx_.tp.theta, omega, t, ctx_.cfg.term_cap);
  const KernelTable::Value& h1 = mean_table_->H(1);
  SeriesValue tail = contract(nullptr, w0_, nullptr, t, 1);
  const double kmu = qp.k * qp.mu;
  SeriesValue out;
  out.value = (double)(drift * h1.value + kmu * (long double)tail.value);
  out.err = std::fabs(drift) * (double)h1.err + kmu * tail.err;
  out.status = tail.status;
  out.orders_used = tail.orders_used;
  return out;
}

SeriesValue SeriesEvaluator::busy_cdf(int a, double t) {
  const QueueParams& qp = ctx_.qp;
  const int k = qp.k;
  if (a < k || a > qp.l() * k || a % k != 0)
    throw domain_error("busy_period_cdf: a must be one of k, 2k, ..., lk");
  auto it = busy_.find(a);
  if (it == busy_.end()) {
    const int cap = ctx_.cfg.order_cap;
    const long double lkmu = std::log((long double)k * qp.mu);
    std::vector<long double> coef(cap + 1, 0.0L);
    for (int size = 0; a + size * (k + 1) <= cap; ++size)
      for (int w = size; a + size + k * w <= cap; ++w) {
        const long double p = table_at(comp_.P, size, w);
        if (p == 0.0L) continue;
        const int g = a + size + k * w;
        coef[g] += a * p * std::exp((a + k * w) * lkmu + lfact(g - 1) - lfact(a + k * w));
      }
    it = busy_.emplace(a, std::move(coef)).first;
  }
  return contract(nullptr, it->second, nullptr, t, 1);
}

SeriesValue zero_state_prob(const SeriesContext& ctx, double t) { return SeriesEvaluator(ctx).zero_state(t); }

SeriesValue state_prob(const SeriesContext& ctx, int n, int s, double t) {
  return SeriesEvaluator(ctx).state(n, s, t);
}

SeriesValue queue_length_prob(const SeriesContext& ctx, long m, double t) {
  return SeriesEvaluator(ctx).phase(m, t);
}

SeriesValue mean_queue_length(const SeriesContext& ctx, double t) { return SeriesEvaluator(ctx).mean(t); }

SeriesValue busy_period_cdf(const SeriesContext& ctx, int a, double t) {
  return SeriesEvaluator(ctx).busy_cdf(a, t);
}

namespace {

// Phases are added until 2 l k consecutive probabilities (at every time) sit
// below the tolerance past the point where the mass has been mostly collected.
ProbabilityTable build_table(SeriesEvaluator& ev, const std::vector<double>& times, long max_phase) {
  const SeriesContext& ctx = ev.context();
  const double tol = ctx.cfg.tol;
  const long run_needed = 2L * ctx.qp.l() * ctx.qp.k;
  const long hard_cap = static_cast<long>(ctx.cfg.order_cap) * ctx.qp.l() * ctx.qp.k;
  ProbabilityTable tab;
  tab.kind = TableKind::analytic;
  tab.times = times;
  tab.probs.assign(times.size(), {});
  tab.err.assign(times.size(), {});
  tab.lost_mass.assign(times.size(), 0.0);
  std::vector<double> total(times.size(), 0.0);
  long quiet = 0;
  for (long m = 0;; ++m) {
    if (max_phase >= 0 && m > max_phase) break;
    if (max_phase < 0 && m > hard_cap) {
      tab.status = Status::unconverged;
      break;
    }
    bool small = true;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const SeriesValue v = ev.phase(m, times[i]);
      tab.probs[i].push_back(v.value);
      tab.err[i].push_back(v.err);
      total[i] += v.value;
      if (v.status != Status::converged) tab.status = Status::unconverged;
      if (std::fabs(v.value) >= tol || total[i] < 0.5) small = false;
    }
    tab.states.push_back(m);
    quiet = small ? quiet + 1 : 0;
    if (max_phase < 0 && quiet >= run_needed) break;
  }
  // tail beyond the last phase: geometric extrapolation of the last run
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto& p = tab.probs[i];
    const std::size_t n = p.size();
    if (n < 4) continue;
    const long span = std::min<long>(run_needed, static_cast<long>(n) / 2);
    const double last = std::fabs(p[n - 1]) + std::fabs(p[n - 2]);
    const double before = std::fabs(p[n - 1 - span]) + std::fabs(p[n - 2 - span]);
    double q = before > 0.0 ? std::pow(last / before, 1.0 / span) : 0.0;
    q = std::min(q, 0.99);
    tab.lost_mass[i] = last / 2.0 * q / (1.0 - q);
  }
  return tab;
}

}  // namespace

ProbabilityTable analytic_table(const SeriesContext& ctx, const std::vector<double>& times, long max_phase) {
  SeriesEvaluator ev(ctx);
  return build_table(ev, times, max_phase);
}

SeriesValue pgf(const SeriesContext& ctx, double u, double t, long max_phase) {
  if (!(std::fabs(u) <= 1.0)) throw domain_error("pgf: |u| must not exceed 1");
  SeriesEvaluator ev(ctx);
  const ProbabilityTable tab = build_table(ev, {t}, max_phase);
  long double sum = 0.0L, err = 0.0L, up = 1.0L;
  for (std::size_t m = 0; m < tab.states.size(); ++m) {
    sum += up * tab.probs[0][m];
    err += std::fabs(up) * tab.err[0][m];
    up *= u;
  }
  SeriesValue out;
  out.value = (double)sum;
  out.err = (double)err + tab.lost_mass[0];
  out.status = tab.status;
  return out;
}

bool certify(const SeriesContext& ctx, double t) {
  SeriesContext half = ctx;
  half.cfg.order_cap = std::max(1, ctx.cfg.order_cap / 2);
  const SeriesValue full = zero_state_prob(ctx, t);
  const SeriesValue reduced = zero_state_prob(half, t);
  return full.status == Status::converged && reduced.status == Status::converged &&
         std::fabs(full.value - reduced.value) <= ctx.cfg.tol;
}

// ---- inter-event laws -------------------------------------------------------

namespace {
void require_single_arrivals(const SeriesContext& ctx) {
  ctx.validate();
  if (ctx.qp.l() != 1) throw domain_error("inter-event laws need single arrivals (l = 1)");
}
}  // namespace

double inter_event_rate(const SeriesContext& ctx, InterEvent kind) {
  require_single_arrivals(ctx);
  const double lambda = ctx.qp.lambdas[0];
  const double kmu = ctx.qp.k * ctx.qp.mu;
  switch (kind) {
    case InterEvent::arrival: return lambda;
    case InterEvent::phase: return kmu;
    case InterEvent::sojourn: return lambda + kmu;
  }
  return lambda;
}

SeriesValue inter_event_survival(const SeriesContext& ctx, InterEvent kind, double t) {
  const double rate = inter_event_rate(ctx, kind);
  if (!(t >= 0.0)) throw domain_error("survival: t must be nonnegative");
  const double omega = std::pow(ctx.tp.theta, ctx.tp.alpha);
  KernelTable tab(ctx.tp.alpha, ctx.tp.theta, omega, t, ctx.cfg.term_cap);
  long double sum = 0.0L, magnitude = 0.0L, err = 0.0L, peak = 0.0L, prev = 0.0L;
  long double power = 1.0L;  // (-rate)^r
  SeriesValue out;
  out.status = Status::unconverged;
  out.err = std::numeric_limits<double>::infinity();
  for (int r = 0; r <= ctx.cfg.term_cap; ++r) {
    const KernelTable::Value& h = tab.H(r);
    const long double term = power * h.value;
    sum += term;
    magnitude += std::fabs(term);
    err += std::fabs(power) * h.err;
    peak = std::max(peak, std::fabs(term));
    const bool falling = std::fabs(term) <= prev;
    prev = std::fabs(term);
    out.orders_used = r + 1;
    if (t == 0.0 || (r > 1 && falling && std::fabs(term) <= 1e-24L * peak)) {
      out.err = (double)(err + 16.0L * eps_ld * magnitude + 2.0L * std::fabs(term));
      out.status = out.err <= ctx.cfg.tol ? Status::converged : Status::unconverged;
      break;
    }
    power *= -rate;
  }
  out.value = (double)sum;
  return out;
}

SeriesValue interarrival_survival(const SeriesContext& ctx, double t) {
  return inter_event_survival(ctx, InterEvent::arrival, t);
}
SeriesValue interphase_survival(const SeriesContext& ctx, double t) {
  return inter_event_survival(ctx, InterEvent::phase, t);
}
SeriesValue sojourn_survival(const SeriesContext& ctx, double t) {
  return inter_event_survival(ctx, InterEvent::sojourn, t);
}

SeriesValue survival_collapsed(const SeriesContext& ctx, double rate, double t) {
  ctx.validate();
  if (!(rate > 0.0)) throw domain_error("survival_collapsed: rate must be positive");
  const double omega = std::pow(ctx.tp.theta, ctx.tp.alpha) - rate;
  KernelTable tab(ctx.tp.alpha, ctx.tp.theta, omega, t, ctx.cfg.term_cap);
  const KernelTable::Value& h = tab.H(1);
  SeriesValue out;
  out.value = (double)(1.0L - rate * h.value);
  out.err = (double)(rate * h.err);
  out.status = out.err <= ctx.cfg.tol ? Status::converged : Status::unconverged;
  out.orders_used = 1;
  return out;
}

double survival_supported_range(const SeriesContext& ctx, InterEvent kind, double t_max) {
  double last = 0.0;
  for (int i = 1; 0.05 * i <= t_max + 1e-12; ++i) {
    const double t = 0.05 * i;
    if (inter_event_survival(ctx, kind, t).status != Status::converged) break;
    last = t;
  }
  return last;
}

// ---- governing equations ---------------------------------------------------------

std::vector<StatePhase> representative_states(const QueueParams& qp) {
  const int k = qp.k, l = qp.l();
  std::vector<StatePhase> out{{0, 0}};
  if (k > 1) out.push_back({1, 1});
  out.push_back({1, k});
  if (k > 1) out.push_back({2, 1});
  if (l >= 2) out.push_back({2, k});
  out.push_back({l + 1, k});
  return out;
}

namespace {

struct Samples {
  std::vector<double> grid;
  std::map<long, std::vector<double>> phase;  // phase count -> values on grid
};

Samples sample_phases(const SeriesContext& ctx, const std::vector<long>& phases, ResidualGrid g) {
  Samples out;
  out.grid = uniform_grid(g.t_max, g.points);
  SeriesEvaluator ev(ctx);
  for (long m : phases) out.phase[m].resize(out.grid.size());
  for (std::size_t i = 0; i < out.grid.size(); ++i)
    for (long m : phases) out.phase[m][i] = ev.phase(m, out.grid[i]).value;
  return out;
}

SampledFunction as_function(const std::vector<double>& grid, const std::vector<double>& v) {
  SampledFunction f;
  f.grid = grid;
  f.values = v;
  f.f0 = v.front();
  return f;
}

std::size_t grid_index(const std::vector<double>& grid, double t) {
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::fabs(grid[i] - t) <= 1e-12 * std::max(1.0, t)) return i;
  throw domain_error("residual: t must be a point of the residual grid");
}

ResidualReport finish(std::string name, double t, const EvalResult& d, double rhs) {
  ResidualReport r;
  r.equation = std::move(name);
  r.t = t;
  r.lhs = d.value;
  r.rhs = rhs;
  r.residual = std::fabs(d.value - rhs);
  r.derivative_err = d.abs_error_bound;
  r.status = d.status;
  return r;
}

}  // namespace

std::vector<ResidualReport> system_residuals(const SeriesContext& ctx, const std::vector<double>& times,
                                             const std::vector<StatePhase>& states, ResidualGrid grid) {
  ctx.validate();
  const QueueParams& qp = ctx.qp;
  const int k = qp.k, l = qp.l();
  const double Lambda = qp.Lambda(), kmu = k * qp.mu;
  const FracParams fp{ctx.tp.theta, ctx.tp.alpha};
  if (!(fp.alpha < 1.0)) throw domain_error("system_residuals: alpha must lie in (0,1)");

  auto idx = [&](int n, int s) -> long {
    if (n == 0) return s == 0 ? 0 : -1;
    if (n < 0) return -1;
    return phase_index({n, s}, k);
  };
  // collect every probability the chosen equations touch
  std::vector<long> needed;
  auto need = [&](long m) {
    if (m >= 0 && std::find(needed.begin(), needed.end(), m) == needed.end()) needed.push_back(m);
  };
  for (const StatePhase& sp : states) {
    if (sp.n == 0) {
      need(0);
      need(idx(1, 1));
      continue;
    }
    need(idx(sp.n, sp.s));
    need(sp.s < k ? idx(sp.n, sp.s + 1) : idx(sp.n + 1, 1));
    for (int m = 1; m <= std::min(sp.n, l); ++m) need(sp.n - m == 0 ? (sp.s == k ? 0 : -1) : idx(sp.n - m, sp.s));
  }
  const Samples smp = sample_phases(ctx, needed, grid);
  auto value = [&](long m, std::size_t i) { return m < 0 ? 0.0 : smp.phase.at(m)[i]; };

  std::vector<ResidualReport> out;
  for (const StatePhase& sp : states) {
    if (sp.n != 0 && (sp.n < 1 || sp.s < 1 || sp.s > k)) throw domain_error("system_residuals: invalid state");
    const long self = sp.n == 0 ? 0 : idx(sp.n, sp.s);
    const SampledFunction f = as_function(smp.grid, smp.phase.at(self));
    for (double t : times) {
      const std::size_t i = grid_index(smp.grid, t);
      const EvalResult d = caputo_tempered_derivative(f, fp, t);
      double rhs;
      std::string name;
      if (sp.n == 0) {
        rhs = -Lambda * value(0, i) + kmu * value(idx(1, 1), i);
        name = "p(0,0)";
      } else {
        rhs = -(Lambda + kmu) * value(self, i);
        rhs += kmu * value(sp.s < k ? idx(sp.n, sp.s + 1) : idx(sp.n + 1, 1), i);
        if (sp.s < k) {
          for (int m = 1; m <= std::min(sp.n, l); ++m)
            if (sp.n - m >= 1) rhs += Lambda * qp.c(m) * value(idx(sp.n - m, sp.s), i);
        } else if (sp.n <= l) {
          for (int m = 1; m <= sp.n - 1; ++m) rhs += Lambda * qp.c(m) * value(idx(sp.n - m, k), i);
          rhs += Lambda * qp.c(sp.n) * value(0, i);
        } else {
          for (int m = 1; m <= l; ++m) rhs += Lambda * qp.c(m) * value(idx(sp.n - m, k), i);
        }
        name = "p(" + std::to_string(sp.n) + "," + std::to_string(sp.s) + ")";
      }
      out.push_back(finish(name, t, d, rhs));
    }
  }
  return out;
}

std::vector<ResidualReport> queue_length_residuals(const SeriesContext& ctx, const std::vector<double>& times,
                                                   const std::vector<long>& phases, ResidualGrid grid) {
  ctx.validate();
  const QueueParams& qp = ctx.qp;
  const int k = qp.k;
  const double Lambda = qp.Lambda(), kmu = k * qp.mu;
  const FracParams fp{ctx.tp.theta, ctx.tp.alpha};
  std::vector<long> needed;
  for (long n : phases)
    for (long m = 0; m <= n + 1; ++m)
      if (std::find(needed.begin(), needed.end(), m) == needed.end()) needed.push_back(m);
  const Samples smp = sample_phases(ctx, needed, grid);
  auto c_prime = [&](long m) { return (m % k == 0 && m / k <= qp.l()) ? qp.c(static_cast<int>(m / k)) : 0.0; };
  std::vector<ResidualReport> out;
  for (long n : phases) {
    const SampledFunction f = as_function(smp.grid, smp.phase.at(n));
    for (double t : times) {
      const std::size_t i = grid_index(smp.grid, t);
      const EvalResult d = caputo_tempered_derivative(f, fp, t);
      double rhs;
      if (n == 0) {
        rhs = -Lambda * smp.phase.at(0)[i] + kmu * smp.phase.at(1)[i];
      } else {
        rhs = -(Lambda + kmu) * smp.phase.at(n)[i] + kmu * smp.phase.at(n + 1)[i];
        for (long m = 1; m <= n; ++m) rhs += Lambda * c_prime(m) * smp.phase.at(n - m)[i];
      }
      out.push_back(finish("q" + std::to_string(n), t, d, rhs));
    }
  }
  return out;
}

std::vector<ResidualReport> pgf_residuals(const SeriesContext& ctx, const std::vector<double>& times,
                                          const std::vector<double>& us, ResidualGrid grid) {
  ctx.validate();
  const QueueParams& qp = ctx.qp;
  const int k = qp.k;
  const double Lambda = qp.Lambda(), kmu = k * qp.mu;
  const FracParams fp{ctx.tp.theta, ctx.tp.alpha};
  // enough phases that the omitted tail is below the tolerance at t_max
  SeriesEvaluator ev(ctx);
  const ProbabilityTable tab = build_table(ev, {grid.t_max}, -1);
  std::vector<long> phases(tab.states.begin(), tab.states.end());
  const Samples smp = sample_phases(ctx, phases, grid);
  std::vector<ResidualReport> out;
  for (double u : us) {
    std::vector<double> G(smp.grid.size(), 0.0);
    for (std::size_t i = 0; i < G.size(); ++i) {
      double up = 1.0, acc = 0.0;
      for (long m : phases) {
        acc += up * smp.phase.at(m)[i];
        up *= u;
      }
      G[i] = acc;
    }
    double batch = 0.0;
    for (int m = 1; m <= qp.l(); ++m) batch += qp.c(m) * std::pow(u, m * k);
    const double factor = kmu * (1.0 - u) - Lambda * u * (1.0 - batch);
    const SampledFunction f = as_function(smp.grid, G);
    for (double t : times) {
      const std::size_t i = grid_index(smp.grid, t);
      EvalResult d = caputo_tempered_derivative(f, fp, t);
      d.value *= u;
      d.abs_error_bound *= std::fabs(u);
      const double rhs = factor * G[i] - kmu * (1.0 - u) * smp.phase.at(0)[i];
      out.push_back(finish("G(u=" + std::to_string(u).substr(0, 4) + ")", t, d, rhs));
    }
  }
  return out;
}

double mean_residual_from(const SampledFunction& mean, const SampledFunction& p0, const SeriesContext& ctx,
                          double t) {
  const QueueParams& qp = ctx.qp;
  const double kmu = qp.k * qp.mu;
  const FracParams fp{ctx.tp.theta, ctx.tp.alpha};
  const std::size_t i = grid_index(p0.grid, t);
  const EvalResult d = caputo_tempered_derivative(mean, fp, t);
  return std::fabs(d.value - kmu * p0.values[i] + kmu - qp.k * qp.Lambda() * qp.mean_batch());
}

ResidualReport mean_residual(const SeriesContext& ctx, double t, ResidualGrid g) {
  ctx.validate();
  const std::vector<double> grid = uniform_grid(g.t_max, g.points);
  SeriesEvaluator ev(ctx);
  std::vector<double> m(grid.size()), p0(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    m[i] = ev.mean(grid[i]).value;
    p0[i] = ev.zero_state(grid[i]).value;
  }
  const SampledFunction mf = as_function(grid, m);
  const SampledFunction pf = as_function(grid, p0);
  const FracParams fp{ctx.tp.theta, ctx.tp.alpha};
  const EvalResult d = caputo_tempered_derivative(mf, fp, t);
  const QueueParams& qp = ctx.qp;
  const double kmu = qp.k * qp.mu;
  const std::size_t i = grid_index(grid, t);
  const double rhs = kmu * p0[i] - kmu + qp.k * qp.Lambda() * qp.mean_batch();
  ResidualReport r = finish("mean", t, d, rhs);
  r.residual = mean_residual_from(mf, pf, ctx, t);
  return r;
}

// ---- single-arrival transcription ---------------------------------------------

namespace single_arrival {

namespace {

struct Ctx {
  double lambda, kmu, alpha;
  int k;
  long double llam, lkmu;
};

Ctx unpack(const SeriesContext& ctx) {
  ctx.validate();
  if (ctx.qp.l() != 1) throw domain_error("single_arrival: needs l = 1");
  Ctx c;
  c.lambda = ctx.qp.lambdas[0];
  c.k = ctx.qp.k;
  c.kmu = c.k * ctx.qp.mu;
  c.alpha = ctx.tp.alpha;
  c.llam = std::log((long double)c.lambda);
  c.lkmu = std::log((long double)c.kmu);
  return c;
}

int order_d(const Ctx& c, int n, int s, int r) { return n + r + c.k * (r + 1) - s + 1; }

long double log_D(const Ctx& c, int n, int s, int r) {
  const int e = c.k * (r + 1) - s;
  return (n + r) * c.llam + e * c.lkmu - lfact(n + r) - lfact(e) + lfact(order_d(c, n, s, r) - 1);
}

int order_delta0(const Ctx& c, int h, int w) { return h + w * (c.k + 1); }

long double log_Z0(const Ctx& c, int h, int w) {
  const int d0 = order_delta0(c, h, w);
  return std::log((long double)h) + w * c.llam - lfact(w) + (d0 - w - 1) * c.lkmu + lfact(d0 - 1) -
         lfact(d0 - w);
}

}  // namespace

Coefficients coefficients(const SeriesContext& ctx, int n, int s, int r, int h, int w) {
  const Ctx c = unpack(ctx);
  if (n < 1 || s < 1 || s > c.k || r < 0 || h < 1 || w < 0)
    throw domain_error("single_arrival::coefficients: index out of range");
  Coefficients out;
  out.d = order_d(c, n, s, r);
  out.log_D = (double)log_D(c, n, s, r);
  out.delta0 = order_delta0(c, h, w);
  out.log_Z0 = (double)log_Z0(c, h, w);
  out.f = out.d + out.delta0;
  out.log_F = (double)(c.lkmu + log_D(c, n, s, r) + log_Z0(c, h, w));
  if (s != c.k) {
    out.z = order_d(c, n, s + 1, r) + out.delta0;
    out.log_Z = (double)(c.lkmu + log_D(c, n, s + 1, r) + log_Z0(c, h, w));
  } else {
    out.z = order_d(c, n + 1, 1, r) + out.delta0;
    out.log_Z = (double)(c.lkmu + log_D(c, n + 1, 1, r) + log_Z0(c, h, w));
  }
  out.pi = c.alpha * (out.d - 1) + 1.0;
  out.zeta = c.alpha * (out.f - 1) + 1.0;
  out.eta = c.alpha * (out.z - 1) + 1.0;
  return out;
}

namespace {

struct Accumulator {
  long double sum = 0.0L, err = 0.0L, edge = 0.0L;
  int max_order = 0;
  void add(long double coef, const KernelTable::Value& v, int order, int cap, int k) {
    const long double term = coef * v.value;
    sum += term;
    err += std::fabs(coef) * v.err + 4.0L * eps_ld * std::fabs(term);
    if (order > cap - 2 * (k + 1)) edge += std::fabs(term);
    max_order = std::max(max_order, order);
  }
  SeriesValue result(double tol) const {
    SeriesValue out;
    out.value = (double)sum;
    out.err = (double)(err + edge);
    out.status = out.err <= tol ? Status::converged : Status::unconverged;
    out.orders_used = max_order;
    return out;
  }
};

}  // namespace

SeriesValue zero_state_prob(const SeriesContext& ctx, double t) {
  const Ctx c = unpack(ctx);
  const int cap = ctx.cfg.order_cap;
  KernelTable tab(ctx.tp.alpha, ctx.tp.theta, ctx.beta_const(), t, ctx.cfg.term_cap);
  Accumulator acc;
  for (int w = 0; order_delta0(c, 1, w) <= cap; ++w)
    for (int h = 1; order_delta0(c, h, w) <= cap; ++h) {
      const int d0 = order_delta0(c, h, w);
      acc.add(std::exp(log_Z0(c, h, w)), tab.G(d0), d0, cap, c.k);
    }
  return acc.result(ctx.cfg.tol);
}

SeriesValue state_prob(const SeriesContext& ctx, int n, int s, double t) {
  const Ctx c = unpack(ctx);
  if (n < 1 || s < 1 || s > c.k) throw domain_error("single_arrival::state_prob: invalid state");
  const int cap = ctx.cfg.order_cap;
  const bool tilde = ctx.cfg.theta_power == ThetaPowerReading::alpha;
  KernelTable tab(ctx.tp.alpha, ctx.tp.theta, ctx.beta_const(), t, ctx.cfg.term_cap);
  Accumulator acc;
  for (int r = 0; order_d(c, n, s, r) <= cap; ++r) {
    const int d = order_d(c, n, s, r);
    acc.add(std::exp(log_D(c, n, s, r)), tilde ? tab.G_tilde(d) : tab.G(d), d, cap, c.k);
    for (int w = 0; d + order_delta0(c, 1, w) <= cap; ++w)
      for (int h = 1; d + order_delta0(c, h, w) <= cap; ++h) {
        const Coefficients co = coefficients(ctx, n, s, r, h, w);
        acc.add(std::exp((long double)co.log_F), tab.G(co.f), co.f, cap, c.k);
        if (co.z <= cap) acc.add(-std::exp((long double)co.log_Z), tab.G(co.z), co.z, cap, c.k);
      }
  }
  return acc.result(ctx.cfg.tol);
}

}  // namespace single_arrival

}  // namespace erlq
