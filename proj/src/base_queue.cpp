#include "erlq/base_queue.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace erlq {

double QueueParams::Lambda() const {
  return std::accumulate(lambdas.begin(), lambdas.end(), 0.0);
}

double QueueParams::c(int i) const { return lambdas.at(i - 1) / Lambda(); }

double QueueParams::mean_batch() const {
  double s = 0.0;
  for (int i = 1; i <= l(); ++i) s += i * c(i);
  return s;
}

void QueueParams::validate() const {
  if (lambdas.empty()) throw domain_error("QueueParams: at least one arrival rate is required");
  for (double v : lambdas)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw domain_error("QueueParams: arrival rates must be finite and nonnegative");
  if (!(lambdas.back() > 0.0)) throw domain_error("QueueParams: lambda_l must be positive");
  if (k < 1) throw domain_error("QueueParams: k must be at least 1");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw domain_error("QueueParams: mu must be positive");
}

long phase_index(StatePhase sp, int k) {
  if (k < 1) throw domain_error("phase_index: k must be at least 1");
  if (sp.n == 0 && sp.s == 0) return 0;
  if (sp.n < 1 || sp.s < 1 || sp.s > k)
    throw domain_error("phase_index: (" + std::to_string(sp.n) + "," + std::to_string(sp.s) +
                       ") is not a valid state for k=" + std::to_string(k));
  return static_cast<long>(k) * (sp.n - 1) + sp.s;
}

StatePhase phase_inverse(long m, int k) {
  if (k < 1) throw domain_error("phase_inverse: k must be at least 1");
  if (m < 0) throw domain_error("phase_inverse: negative phase index");
  if (m == 0) return {0, 0};
  const long s = (m - 1) % k + 1;
  return {static_cast<int>((m - s) / k + 1), static_cast<int>(s)};
}

const char* to_string(TableKind kind) {
  switch (kind) {
    case TableKind::analytic: return "analytic";
    case TableKind::uniformization: return "uniformization";
    case TableKind::montecarlo: return "montecarlo";
  }
  return "?";
}

Generator generator(const QueueParams& params, int cap) {
  params.validate();
  const int l = params.l(), k = params.k;
  if (cap < l * k) throw domain_error("generator: cap must be at least l*k");
  Generator g;
  g.cap = cap;
  g.rows.resize(cap + 1);
  g.diagonal.assign(cap + 1, 0.0);
  g.overflow.assign(cap + 1, 0.0);
  const double service = k * params.mu;
  for (int j = 0; j <= cap; ++j) {
    double out = 0.0;
    for (int i = 1; i <= l; ++i) {
      const double rate = params.lambdas[i - 1];
      if (rate == 0.0) continue;
      const int to = j + i * k;
      if (to <= cap)
        g.rows[j].push_back({to, rate});
      else
        g.overflow[j] += rate;
      out += rate;
    }
    if (j >= 1) {
      g.rows[j].push_back({j - 1, service});
      out += service;
    }
    g.diagonal[j] = -out;
  }
  return g;
}

int default_state_cap(const QueueParams& params, double t_max) {
  const int l = params.l(), k = params.k;
  const double bound = 40.0 * (params.Lambda() * t_max * l * k + k);
  const int step = k * l;
  return (static_cast<int>(std::floor(bound / step)) + 1) * step;
}

ProbabilityTable transient_uniformization(const QueueParams& params,
                                          const std::vector<double>& times, int cap,
                                          double tol) {
  if (!(tol > 0.0)) throw domain_error("transient_uniformization: tol must be positive");
  for (double t : times)
    if (!(t >= 0.0)) throw domain_error("transient_uniformization: times must be nonnegative");
  const Generator g = generator(params, cap);
  const int n = cap + 1;
  double q = 0.0;
  for (double d : g.diagonal) q = std::max(q, -d);

  ProbabilityTable table;
  table.kind = TableKind::uniformization;
  table.times = times;
  table.states.resize(n);
  std::iota(table.states.begin(), table.states.end(), 0L);

  for (double t : times) {
    std::vector<double> v(n, 0.0), next(n, 0.0), acc(n, 0.0);
    v[0] = 1.0;
    double lost = 0.0, acc_lost = 0.0;
    const double qt = q * t;
    double poisson_tail = 0.0;
    if (qt == 0.0) {
      acc = v;
    } else {
      double cumulative = 0.0;
      for (long step = 0;; ++step) {
        const double w = std::exp(-qt + step * std::log(qt) - log_gamma(step + 1.0));
        for (int j = 0; j < n; ++j) acc[j] += w * v[j];
        acc_lost += w * lost;
        cumulative += w;
        // Poisson tail beyond this step, geometric bound once past the mode.
        if (step + 2 > qt) {
          const double r = qt / (step + 2.0);
          const double tail = w * qt / (step + 1.0) / (1.0 - r);
          if (tail < tol / 2.0 || cumulative >= 1.0) {
            poisson_tail = std::max(tail, 0.0);
            break;
          }
        }
        std::fill(next.begin(), next.end(), 0.0);
        for (int j = 0; j < n; ++j) {
          const double vj = v[j];
          if (vj == 0.0) continue;
          next[j] += vj * (1.0 + g.diagonal[j] / q);
          for (const auto& e : g.rows[j]) next[e.col] += vj * e.rate / q;
          lost += vj * g.overflow[j] / q;
        }
        v.swap(next);
      }
    }
    table.probs.push_back(acc);
    table.err.push_back(std::vector<double>(n, poisson_tail + acc_lost));
    table.lost_mass.push_back(poisson_tail + acc_lost);
    if (acc_lost > tol / 2.0) table.status = Status::unconverged;
  }
  return table;
}

ProbabilityTable transient_uniformization(const QueueParams& params, double t, int cap,
                                          double tol) {
  return transient_uniformization(params, std::vector<double>{t}, cap, tol);
}

int Trajectory::at(double t) const {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  return phases[static_cast<std::size_t>(it - times.begin()) - 1];
}

int draw_batch(const QueueParams& params, Rng& rng) {
  const double u = uniform_open(rng) * params.Lambda();
  double acc = 0.0;
  for (int i = 1; i <= params.l(); ++i) {
    acc += params.lambdas[i - 1];
    if (u <= acc) return i;
  }
  return params.l();
}

Trajectory simulate_gillespie(const QueueParams& params, double horizon, Rng& rng, int start) {
  if (!(horizon > 0.0)) throw domain_error("simulate_gillespie: horizon must be positive");
  if (start < 0) throw domain_error("simulate_gillespie: negative start state");
  const double Lambda = params.Lambda();
  const double service = params.k * params.mu;
  Trajectory path;
  path.horizon = horizon;
  path.times.push_back(0.0);
  path.phases.push_back(start);
  double t = 0.0;
  int j = start;
  for (;;) {
    const double rate = j == 0 ? Lambda : Lambda + service;
    t += -std::log(uniform_open(rng)) / rate;
    if (t > horizon) break;
    if (j > 0 && uniform_open(rng) * rate < service)
      --j;
    else
      j += draw_batch(params, rng) * params.k;
    path.times.push_back(t);
    path.phases.push_back(j);
  }
  return path;
}

}  // namespace erlq
