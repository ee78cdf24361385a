#include "erlq/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace erlq {

const char* to_string(TimeChange c) {
  switch (c) {
    case TimeChange::tempered: return "tempered";
    case TimeChange::gamma: return "gamma";
    case TimeChange::none: return "none";
  }
  return "none";
}

TimeChange time_change_from_string(const std::string& s) {
  if (s == "tempered") return TimeChange::tempered;
  if (s == "gamma") return TimeChange::gamma;
  if (s == "none") return TimeChange::none;
  throw domain_error("unknown time change '" + s + "'");
}

void SimPlan::validate() const {
  qp.validate();
  if (time_change == TimeChange::tempered) tp.validate();
  if (time_change == TimeChange::gamma) gp.validate();
  if (n_paths < 1) throw domain_error("SimPlan: n_paths must be at least 1");
  if (!(horizon > 0.0)) throw domain_error("SimPlan: horizon must be positive");
  if (!(step > 0.0)) throw domain_error("SimPlan: step must be positive");
  if (workers < 1) throw domain_error("SimPlan: workers must be at least 1");
  if (busy_cap < 0.0) throw domain_error("SimPlan: busy_cap must be nonnegative");
  for (double t : times)
    if (!(t >= 0.0 && t <= horizon)) throw domain_error("SimPlan: target times must lie in [0, horizon]");
  if (busy_start != 0 && (busy_start % qp.k != 0 || busy_start < qp.k || busy_start > qp.l() * qp.k))
    throw domain_error("SimPlan: busy_start must be one of k, 2k, ..., lk");
}

namespace {

// Runs body(i) for i in [0, n) on `workers` threads; each index is visited once.
template <class Body>
void for_each_path(long n, int workers, Body body) {
  if (workers <= 1 || n < 2) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (long i = w; i < n; i += workers) body(i);
    });
  for (auto& th : pool) th.join();
}

double subordinator_at(const SimPlan& plan, double op, Rng& rng) {
  if (op <= 0.0) return 0.0;
  switch (plan.time_change) {
    case TimeChange::tempered: return sample_tempered_stable_increment(plan.tp, op, rng);
    case TimeChange::gamma: return sample_gamma_increment(plan.gp, op, rng);
    case TimeChange::none: return op;
  }
  return op;
}

InversePath draw_inverse(const SimPlan& plan, double step, Rng& rng) {
  if (plan.time_change == TimeChange::gamma) return gamma_inverse_path(plan.gp, plan.horizon, step, rng);
  return inverse_path(plan.tp, plan.horizon, step, rng);
}

EstimateTable tabulate(const SimPlan& plan, const std::vector<std::vector<int>>& raw) {
  EstimateTable tab;
  tab.kind = TableKind::montecarlo;
  tab.n_paths = plan.n_paths;
  tab.times = plan.times;
  int top = 0;
  for (const auto& row : raw)
    for (int v : row) top = std::max(top, v);
  for (long m = 0; m <= top; ++m) tab.states.push_back(m);
  const double n = static_cast<double>(plan.n_paths);
  for (std::size_t j = 0; j < plan.times.size(); ++j) {
    std::vector<long> counts(top + 1, 0);
    double sum = 0.0, sum2 = 0.0;
    for (const auto& row : raw) {
      ++counts[row[j]];
      sum += row[j];
      sum2 += static_cast<double>(row[j]) * row[j];
    }
    std::vector<double> p(top + 1), se(top + 1);
    for (int m = 0; m <= top; ++m) {
      p[m] = counts[m] / n;
      se[m] = std::sqrt(p[m] * (1.0 - p[m]) / n);
    }
    tab.probs.push_back(p);
    tab.err.push_back(se);
    tab.lost_mass.push_back(0.0);
    const double mean = sum / n;
    const double var = n > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1)) : 0.0;
    tab.mean.push_back(mean);
    tab.mean_stderr.push_back(std::sqrt(var / n));
  }
  return tab;
}

}  // namespace

SimOutput simulate_time_changed(const SimPlan& plan) {
  plan.validate();
  std::vector<std::vector<int>> raw(plan.n_paths, std::vector<int>(plan.times.size(), 0));
  for_each_path(plan.n_paths, plan.workers, [&](long i) {
    Rng rng = path_stream(plan.seed, static_cast<std::uint64_t>(i));
    if (plan.time_change == TimeChange::none) {
      const Trajectory q = simulate_gillespie(plan.qp, plan.horizon, rng);
      for (std::size_t j = 0; j < plan.times.size(); ++j) raw[i][j] = q.at(plan.times[j]);
      return;
    }
    const InversePath y = draw_inverse(plan, plan.step, rng);
    const Trajectory q = simulate_gillespie(plan.qp, std::max(y.operational_span(), plan.step), rng);
    for (std::size_t j = 0; j < plan.times.size(); ++j) raw[i][j] = q.at(y.at(plan.times[j]));
  });
  SimOutput out;
  out.table = tabulate(plan, raw);
  out.raw_phases = std::move(raw);
  return out;
}

StepHalving step_halving(const SimPlan& plan) {
  plan.validate();
  if (plan.time_change == TimeChange::none) throw domain_error("step_halving: needs a time change");
  const std::size_t nt = plan.times.size();
  std::vector<std::vector<int>> fine(plan.n_paths, std::vector<int>(nt)), coarse = fine;
  for_each_path(plan.n_paths, plan.workers, [&](long i) {
    Rng rng = path_stream(plan.seed, static_cast<std::uint64_t>(i));
    const InversePath yf = draw_inverse(plan, plan.step / 2.0, rng);
    const InversePath yc = coarsen(yf);
    const Trajectory q = simulate_gillespie(plan.qp, std::max(yf.operational_span(), plan.step), rng);
    for (std::size_t j = 0; j < nt; ++j) {
      fine[i][j] = q.at(yf.at(plan.times[j]));
      coarse[i][j] = q.at(yc.at(plan.times[j]));
    }
  });
  StepHalving out;
  out.fine = tabulate(plan, fine);
  out.coarse = tabulate(plan, coarse);
  for (std::size_t j = 0; j < nt; ++j) {
    const std::size_t states = std::min(out.fine.states.size(), out.coarse.states.size());
    for (std::size_t m = 0; m < states; ++m) {
      const double se = std::max(out.fine.err[j][m], out.coarse.err[j][m]);
      const double shift = std::fabs(out.fine.probs[j][m] - out.coarse.probs[j][m]);
      if (se > 0.0) out.max_shift_sigma = std::max(out.max_shift_sigma, shift / se);
    }
  }
  return out;
}

// ---- busy period -----------------------------------------------------------

double BusySamples::censored_fraction() const {
  return samples.empty() ? 0.0 : static_cast<double>(window_censored) / samples.size();
}

double BusySamples::empirical_cdf(double t) const {
  if (samples.empty()) return 0.0;
  long count = 0;
  for (double b : samples)
    if (b <= t) ++count;
  return static_cast<double>(count) / samples.size();
}

double default_busy_cap(const SimPlan& plan) {
  const QueueParams& qp = plan.qp;
  const int a = plan.busy_start == 0 ? qp.k : plan.busy_start;
  const double rho = qp.Lambda() * qp.mean_batch() / qp.mu;
  if (rho < 1.0) return 50.0 * a / (qp.k * qp.mu * (1.0 - rho));
  return 50.0 * plan.horizon;
}

BusySamples simulate_busy_period(const SimPlan& plan) {
  plan.validate();
  const QueueParams& qp = plan.qp;
  const int a = plan.busy_start == 0 ? qp.k : plan.busy_start;
  BusySamples out;
  out.cap = plan.busy_cap > 0.0 ? plan.busy_cap : default_busy_cap(plan);
  out.samples.assign(plan.n_paths, 0.0);
  out.operational.assign(plan.n_paths, 0.0);
  std::vector<char> op_cens(plan.n_paths, 0), win_cens(plan.n_paths, 0);
  const double Lambda = qp.Lambda(), service = qp.k * qp.mu, rate = Lambda + service;
  for_each_path(plan.n_paths, plan.workers, [&](long i) {
    Rng rng = path_stream(plan.seed, static_cast<std::uint64_t>(i));
    double t = 0.0;
    long j = a;
    bool absorbed = false;
    while (true) {
      t += -std::log(uniform_open(rng)) / rate;
      if (t > out.cap) break;
      if (uniform_open(rng) * rate < service) {
        if (--j == 0) {
          absorbed = true;
          break;
        }
      } else {
        j += static_cast<long>(draw_batch(qp, rng)) * qp.k;
      }
    }
    if (absorbed) {
      out.operational[i] = t;
      out.samples[i] = subordinator_at(plan, t, rng);
    } else {
      op_cens[i] = 1;
      out.operational[i] = out.cap;
      const double d = subordinator_at(plan, out.cap, rng);
      out.samples[i] = std::numeric_limits<double>::infinity();
      if (d <= plan.horizon) win_cens[i] = 1;
    }
  });
  for (long i = 0; i < plan.n_paths; ++i) {
    out.op_censored += op_cens[i];
    out.window_censored += win_cens[i];
  }
  return out;
}

// ---- inter-event times ---------------------------------------------------------

InterEventSamples collect_inter_event_times(const SimPlan& plan, long n) {
  plan.validate();
  if (plan.qp.l() != 1) throw domain_error("collect_inter_event_times: needs l = 1");
  if (n < 1) throw domain_error("collect_inter_event_times: n must be at least 1");
  const double lambda = plan.qp.lambdas[0], kmu = plan.qp.k * plan.qp.mu;
  InterEventSamples out;
  auto draw = [&](std::vector<double>& dst, double rate, std::uint64_t stream) {
    dst.resize(n);
    Rng rng = path_stream(plan.seed, stream);
    for (long i = 0; i < n; ++i) {
      const double e = -std::log(uniform_open(rng)) / rate;
      dst[i] = subordinator_at(plan, e, rng);
    }
  };
  draw(out.arrival, lambda, 0xA001);
  draw(out.phase, kmu, 0xA002);
  draw(out.sojourn, lambda + kmu, 0xA003);
  return out;
}

KsResult ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf, double level) {
  if (samples.empty()) throw domain_error("ks_statistic: no samples");
  if (!(level > 0.0 && level < 1.0)) throw domain_error("ks_statistic: level must lie in (0,1)");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  KsResult out;
  out.n = static_cast<long>(samples.size());
  out.statistic = d;
  out.critical = std::sqrt(-std::log(level / 2.0) / 2.0) / std::sqrt(n);
  out.pass = d <= out.critical;
  return out;
}

double dkw_band(long n, double level) {
  if (n < 1) throw domain_error("dkw_band: n must be at least 1");
  return std::sqrt(std::log(2.0 / level) / (2.0 * n));
}

double lag1_autocorrelation(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 3) throw domain_error("lag1_autocorrelation: need at least 3 values");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    den += (x[i] - mean) * (x[i] - mean);
    if (i + 1 < n) num += (x[i] - mean) * (x[i + 1] - mean);
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace erlq
