#include "erlq/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "erlq/fractional_calculus.hpp"

namespace erlq {

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

std::string fmt_g(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace

ValidationSetup ValidationSetup::reference() {
  ValidationSetup s;
  s.batch.lambdas = {0.6, 0.3};
  s.batch.k = 2;
  s.batch.mu = 1.2;
  s.single.lambdas = {0.8};
  s.single.k = 2;
  s.single.mu = 1.2;
  return s;
}

Validator::Validator(ValidationSetup setup) : setup_(std::move(setup)) {}

SeriesContext Validator::context(const QueueParams& qp, ThetaPowerReading r) const {
  SeriesContext ctx;
  ctx.qp = qp;
  ctx.tp = setup_.tp;
  ctx.cfg = setup_.cfg;
  ctx.cfg.theta_power = r;
  return ctx;
}

const StepHalving& Validator::state_simulation() {
  if (!sim_) {
    SimPlan plan;
    plan.qp = setup_.batch;
    plan.tp = setup_.tp;
    plan.horizon = 1.0;
    plan.times = {1.0};
    plan.n_paths = setup_.mc_paths;
    plan.step = setup_.step;
    plan.seed = setup_.seed;
    plan.workers = setup_.workers;
    sim_ = std::make_unique<StepHalving>(step_halving(plan));
  }
  return *sim_;
}

// ---- 1 ------------------------------------------------------------------------

CheckResult Validator::degenerate_reduction() {
  const auto start = clock_type::now();
  CheckResult out;
  out.criterion = 1;
  out.name = "degenerate reduction (theta=0, alpha=1) vs uniformization";
  out.threshold = 1e-5;
  SeriesContext ctx = context(setup_.batch, ThetaPowerReading::a);
  ctx.tp = {0.0, 1.0};
  const std::vector<double> times{0.5, 1.0, 2.0};
  const ProbabilityTable ref =
      transient_uniformization(ctx.qp, times, default_state_cap(ctx.qp, 2.0), 1e-13);
  SeriesEvaluator ev(ctx);
  double worst = 0.0;
  long compared = 0;
  bool converged = true;
  for (std::size_t i = 0; i < times.size(); ++i) {
    double ref_mean = 0.0, worst_t = 0.0;
    for (std::size_t m = 0; m < ref.states.size(); ++m) {
      ref_mean += ref.states[m] * ref.probs[i][m];
      if (ref.probs[i][m] < 1e-4) continue;
      const SeriesValue v = ev.phase(ref.states[m], times[i]);
      converged = converged && v.status == Status::converged;
      worst_t = std::max(worst_t, std::fabs(v.value - ref.probs[i][m]));
      ++compared;
    }
    const SeriesValue mean = ev.mean(times[i]);
    converged = converged && mean.status == Status::converged;
    const double mean_diff = std::fabs(mean.value - ref_mean);
    out.metrics.push_back({"max_state_diff(t=" + fmt_g(times[i]) + ")", worst_t});
    out.metrics.push_back({"mean_diff(t=" + fmt_g(times[i]) + ")", mean_diff});
    worst = std::max({worst, worst_t, mean_diff});
  }
  out.measured = worst;
  out.seconds = elapsed(start);
  out.pass = converged && worst <= out.threshold && out.seconds <= 120.0;
  out.detail = std::to_string(compared) + " state probabilities and 3 means compared";
  return out;
}

// ---- 2 ------------------------------------------------------------------------

CheckResult Validator::normalization(ThetaPowerReading r) {
  const auto start = clock_type::now();
  CheckResult out;
  out.criterion = 2;
  out.name = std::string("normalization, theta-power reading ") + to_string(r);
  out.threshold = 1e-4;
  const SeriesContext ctx = context(setup_.batch, r);
  const std::vector<double> times{0.25, 0.5, 1.0, 2.0};
  const ProbabilityTable tab = analytic_table(ctx, times);
  bool pass = tab.status == Status::converged;
  double worst_dev = 0.0, worst_budget = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    double total = 0.0, budget = tab.lost_mass[i];
    for (std::size_t m = 0; m < tab.states.size(); ++m) {
      total += tab.probs[i][m];
      budget += tab.err[i][m];
    }
    const double dev = std::fabs(total - 1.0);
    out.metrics.push_back({"total(t=" + fmt_g(times[i]) + ")", total});
    out.metrics.push_back({"budget(t=" + fmt_g(times[i]) + ")", budget});
    pass = pass && dev <= budget && budget <= out.threshold;
    worst_dev = std::max(worst_dev, dev);
    worst_budget = std::max(worst_budget, budget);
  }
  out.measured = worst_dev;
  out.seconds = elapsed(start);
  out.pass = pass && out.seconds <= 300.0;
  out.detail = "max |total-1| " + fmt_g(worst_dev) + " against max budget " + fmt_g(worst_budget) +
               " over " + std::to_string(tab.states.size()) + " phases";
  return out;
}

// ---- 3 ------------------------------------------------------------------------

CheckResult Validator::mc_agreement(ThetaPowerReading r) {
  const auto start = clock_type::now();
  CheckResult out;
  out.criterion = 3;
  out.name = std::string("Monte Carlo agreement at t=1, theta-power reading ") + to_string(r);
  out.threshold = 3.0;
  const StepHalving& sim = state_simulation();
  SeriesEvaluator ev(context(setup_.batch, r));
  double worst = 0.0;
  long checked = 0;
  for (long m = 0;; ++m) {
    const SeriesValue v = ev.phase(m, 1.0);
    if (m > 20 && v.value < 1e-3) break;
    if (v.value < 1e-2) continue;
    const double p = m < static_cast<long>(sim.fine.states.size()) ? sim.fine.probs[0][m] : 0.0;
    const double se = std::sqrt(std::max(v.value * (1.0 - v.value), 1e-300) / sim.fine.n_paths);
    const double z = std::fabs(p - v.value) / se;
    worst = std::max(worst, z);
    ++checked;
  }
  out.measured = worst;
  out.metrics.push_back({"max_z", worst});
  out.metrics.push_back({"states_checked", static_cast<double>(checked)});
  out.metrics.push_back({"step_halving_shift_sigma", sim.max_shift_sigma});
  out.metrics.push_back({"paths", static_cast<double>(sim.fine.n_paths)});
  out.seconds = elapsed(start);
  out.pass = worst <= out.threshold && sim.max_shift_sigma < 1.0 && out.seconds <= 600.0;
  out.detail = std::to_string(checked) + " states with probability >= 1e-2; step-halving shift " +
               fmt_g(sim.max_shift_sigma) + " sigma";
  return out;
}

// ---- 4 ------------------------------------------------------------------------

CheckResult Validator::residuals() {
  const auto start = clock_type::now();
  CheckResult out;
  out.criterion = 4;
  out.name = "fractional system residuals (state, queue-length, pgf)";
  out.threshold = 1e-3;
  const SeriesContext ctx = context(setup_.batch, ThetaPowerReading::a);
  const std::vector<double> times{0.5, 1.0, 1.5};
  std::vector<ResidualReport> all = system_residuals(ctx, times, representative_states(ctx.qp));
  const auto ql = queue_length_residuals(ctx, times, {0, 1, 2, 3, 4, 5, 6});
  const auto gf = pgf_residuals(ctx, times, {0.3, 0.7});
  all.insert(all.end(), ql.begin(), ql.end());
  all.insert(all.end(), gf.begin(), gf.end());
  double worst = 0.0;
  bool converged = true;
  for (const ResidualReport& r : all) {
    worst = std::max(worst, r.residual);
    converged = converged && r.status == Status::converged;
  }
  for (const ResidualReport& r : all)
    if (r.t == 1.0) out.metrics.push_back({r.equation + "(t=1)", r.residual});
  out.measured = worst;
  out.seconds = elapsed(start);
  out.pass = converged && worst <= out.threshold && out.seconds <= 300.0;
  out.detail = std::to_string(all.size()) + " residuals over 6 state classes, 7 queue-length equations, u in {0.3, 0.7}";
  return out;
}

// ---- 5 ------------------------------------------------------------------------

CheckResult Validator::mean_consistency() {
  const auto start = clock_type::now();
  CheckResult out;
  out.criterion = 5;
  out.name = "mean queue length: series vs sum m q_m, and Cauchy residual";
  out.threshold = 1e-4;
  const SeriesContext ctx = context(setup_.batch, ThetaPowerReading::a);
  SeriesEvaluator ev(ctx);
  const SeriesValue mean = ev.mean(1.0);
  const ProbabilityTable tab = analytic_table(ctx, {1.0});
  double summed = 0.0, budget = mean.err;
  for (std::size_t m = 0; m < tab.states.size(); ++m) {
    summed += tab.states[m] * tab.probs[0][m];
    budget += tab.states[m] * tab.err[0][m];
  }
  // tail mass sits beyond the last listed phase; bound its mean contribution
  budget += tab.lost_mass[0] * 2.0 * static_cast<double>(tab.states.size());
  const double diff = std::fabs(mean.value - summed);
  double worst_res = 0.0;
  for (double t : {0.5, 1.0, 1.5}) {
    const ResidualReport r = mean_residual(ctx, t);
    out.metrics.push_back({"cauchy_residual(t=" + fmt_g(t) + ")", r.residual});
    worst_res = std::max(worst_res, r.residual);
  }
  out.metrics.push_back({"series_mean", mean.value});
  out.metrics.push_back({"summed_mean", summed});
  out.metrics.push_back({"combined_budget", budget});
  out.measured = diff;
  out.seconds = elapsed(start);
  out.pass = mean.status == Status::converged && diff <= budget && budget <= out.threshold && worst_res <= 1e-3;
  out.detail = "difference " + fmt_g(diff) + " within budget " + fmt_g(budget) + "; max residual " + fmt_g(worst_res);
  return out;
}

// ---- 6 ------------------------------------------------------------------------

CheckResult Validator::busy_period() {
  const auto start = clock_type::now();
  CheckResult out;
  out.criterion = 6;
  out.name = "busy period CDF (a=k) vs Monte Carlo";
  const SeriesContext ctx = context(setup_.batch, ThetaPowerReading::a);
  SimPlan plan;
  plan.qp = setup_.batch;
  plan.tp = setup_.tp;
  plan.horizon = 2.0;
  plan.n_paths = setup_.busy_paths;
  plan.seed = setup_.seed + 1;
  plan.busy_start = ctx.qp.k;
  plan.workers = setup_.workers;
  const BusySamples b = simulate_busy_period(plan);
  SeriesEvaluator ev(ctx);
  double sup = 0.0, prev = 0.0;
  bool monotone = true, converged = true;
  for (int i = 1; i <= 40; ++i) {
    const double t = 0.05 * i;
    const SeriesValue f = ev.busy_cdf(ctx.qp.k, t);
    converged = converged && f.status == Status::converged;
    monotone = monotone && f.value >= prev - f.err;
    prev = f.value;
    sup = std::max(sup, std::fabs(f.value - b.empirical_cdf(t)));
  }
  out.threshold = 3.0 * dkw_band(plan.n_paths);
  out.measured = sup;
  out.metrics.push_back({"sup_difference", sup});
  out.metrics.push_back({"band", out.threshold});
  out.metrics.push_back({"censored_fraction", b.censored_fraction()});
  out.metrics.push_back({"operationally_censored", static_cast<double>(b.op_censored)});
  out.metrics.push_back({"operational_cap", b.cap});
  out.seconds = elapsed(start);
  out.pass = converged && monotone && sup <= out.threshold && b.censored_fraction() < 1e-3;
  out.detail = "sup over t in {0.05..2}; censored fraction " + fmt_g(b.censored_fraction());
  return out;
}

// ---- 7 ------------------------------------------------------------------------

double inter_event_cdf(const SeriesContext& ctx, InterEvent kind, double t, long* fallbacks) {
  if (t <= 0.0) return 0.0;
  const SeriesValue s = inter_event_survival(ctx, kind, t);
  if (s.status == Status::converged) return 1.0 - s.value;
  if (fallbacks) ++*fallbacks;
  return 1.0 - survival_collapsed(ctx, inter_event_rate(ctx, kind), t).value;
}

CheckResult Validator::inter_event() {
  const auto start = clock_type::now();
  CheckResult out;
  out.criterion = 7;
  out.name = "inter-event laws (l=1): KS tests, identity control, lag-1 correlation";
  const long n = setup_.inter_event_samples;
  SimPlan plan;
  plan.qp = setup_.single;
  plan.tp = setup_.tp;
  plan.seed = setup_.seed + 2;
  const InterEventSamples tempered = collect_inter_event_times(plan, n);
  plan.time_change = TimeChange::none;
  const InterEventSamples plain = collect_inter_event_times(plan, n);

  const SeriesContext ctx = context(setup_.single, ThetaPowerReading::a);
  SeriesContext identity = ctx;
  identity.tp = {0.0, 1.0};
  bool pass = true;
  double worst_ratio = 0.0;
  long fallbacks = 0;
  const std::pair<InterEvent, const char*> kinds[] = {
      {InterEvent::arrival, "arrival"}, {InterEvent::phase, "phase"}, {InterEvent::sojourn, "sojourn"}};
  for (const auto& [kind, label] : kinds) {
    auto pick = [&](const InterEventSamples& s) -> const std::vector<double>& {
      return kind == InterEvent::arrival ? s.arrival : kind == InterEvent::phase ? s.phase : s.sojourn;
    };
    const KsResult ks = ks_statistic(pick(tempered), [&](double t) { return inter_event_cdf(ctx, kind, t, &fallbacks); });
    const double rate = inter_event_rate(ctx, kind);
    const KsResult exp_ks = ks_statistic(pick(plain), [&](double t) { return 1.0 - std::exp(-rate * t); });
    const KsResult id_ks = ks_statistic(pick(plain), [&](double t) { return inter_event_cdf(identity, kind, t); });
    out.metrics.push_back({std::string("ks_") + label, ks.statistic});
    out.metrics.push_back({std::string("ks_identity_exponential_") + label, exp_ks.statistic});
    out.metrics.push_back({std::string("ks_identity_series_") + label, id_ks.statistic});
    pass = pass && ks.pass && exp_ks.pass && id_ks.pass;
    worst_ratio = std::max({worst_ratio, ks.statistic / ks.critical, exp_ks.statistic / exp_ks.critical,
                            id_ks.statistic / id_ks.critical});
    out.threshold = ks.critical;
  }
  const double rho1 = lag1_autocorrelation(tempered.arrival);
  const double rho_band = 3.0 / std::sqrt(static_cast<double>(n));
  out.metrics.push_back({"lag1_autocorrelation", rho1});
  out.metrics.push_back({"lag1_band", rho_band});
  out.metrics.push_back({"single_kernel_fallbacks", static_cast<double>(fallbacks)});
  pass = pass && std::fabs(rho1) <= rho_band;
  out.measured = worst_ratio;
  out.threshold = 1.0;
  out.seconds = elapsed(start);
  out.pass = pass;
  out.detail = "measured is max D/critical over 9 KS tests at 5%, N=" + std::to_string(n) +
               "; lag-1 correlation " + fmt_g(rho1);
  return out;
}

// ---- 8 ------------------------------------------------------------------------

CheckResult Validator::special_functions() {
  const auto start = clock_type::now();
  CheckResult out;
  out.criterion = 8;
  out.name = "special-function identities";
  using boost::math::quadrature::tanh_sinh;

  // Laplace transform of t^{b-1} E^g_{a,b}(x t^a) on a fixed grid, s = 2.
  const double s = 2.0;
  double worst_laplace = 0.0;
  tanh_sinh<double> ts;
  for (double alpha : {0.5, 0.7, 0.9})
    for (double beta : {1.0, 1.5})
      for (double gamma : {1.0, 2.0})
        for (double x : {-0.5, 0.3}) {
          auto f = [&](double t) {
            if (t <= 0.0) return beta == 1.0 ? 1.0 : 0.0;
            const double e = ml3({alpha, beta, gamma, x * std::pow(t, alpha)}, 1e-15).value;
            return std::pow(t, beta - 1.0) * e * std::exp(-s * t);
          };
          // tail: the integrand is dominated by a decaying exponential past T
          double T = 10.0;
          auto bound = [&](double t) {
            const double e = ml3({alpha, beta, gamma, std::fabs(x) * std::pow(t, alpha)}, 1e-15).value;
            const double rate = s - std::pow(std::fabs(x), 1.0 / alpha) - 0.1;
            return std::pow(t, beta - 1.0) * e * std::exp(-s * t) / rate;
          };
          while (bound(T) > 1e-12) T += 2.0;
          const double num = ts.integrate(f, 0.0, T, 1e-14);
          const double exact = std::pow(s, alpha * gamma - beta) / std::pow(std::pow(s, alpha) - x, gamma);
          worst_laplace = std::max(worst_laplace, std::fabs(num - exact));
        }
  out.metrics.push_back({"ml_laplace_max_abs", worst_laplace});

  // Laplace transform of the tempered Caputo derivative of e^{-t}.
  const FracParams fp{0.5, 0.7};
  double worst_caputo = 0.0;
  {
    const double T = 16.0;
    const int points = 16001;
    auto f = [](double t) { return std::exp(-t); };
    const SampledFunction fine = SampledFunction::sample(uniform_grid(T, points), f);
    const SampledFunction coarse = SampledFunction::sample(uniform_grid(T, (points + 1) / 2), f);
    const std::vector<double> df = caputo_tempered_derivative_all(fine, fp);
    const std::vector<double> dc = caputo_tempered_derivative_all(coarse, fp);
    // grid-halving extrapolation of the L1 derivative
    const double gain = std::pow(2.0, 2.0 - fp.alpha) - 1.0;
    SampledFunction d;
    d.grid = coarse.grid;
    d.values.resize(coarse.grid.size());
    for (std::size_t i = 0; i < d.grid.size(); ++i) d.values[i] = df[2 * i] + (df[2 * i] - dc[i]) / gain;
    // value at 0 from the analytic limit of the derivative (finite for smooth f)
    d.values[0] = d.values[1] + (d.values[1] - d.values[2]);
    d.f0 = d.values[0];
    for (double sv : {1.0, 2.0}) {
      const double psi = std::pow(sv + fp.theta, fp.alpha) - std::pow(fp.theta, fp.alpha);
      const double exact = psi / (sv + 1.0) - psi / sv;
      const double tail = std::exp(-sv * T) * std::fabs(d.values.back()) / sv;
      const EvalResult num = numerical_laplace(d, sv, tail, 1e-6);
      worst_caputo = std::max(worst_caputo, std::fabs(num.value - exact));
    }
  }
  out.metrics.push_back({"tempered_caputo_laplace_max_abs", worst_caputo});

  // Classical Caputo derivative of f(t) = t.
  double worst_power = 0.0;
  {
    const SampledFunction f = SampledFunction::sample(uniform_grid(2.0, 2001), [](double t) { return t; });
    for (double alpha : {0.3, 0.5, 0.8})
      for (double t : {0.5, 1.0, 1.5}) {
        const double num = caputo_tempered_derivative(f, {0.0, alpha}, t).value;
        const double exact = std::pow(t, 1.0 - alpha) / std::tgamma(2.0 - alpha);
        worst_power = std::max(worst_power, std::fabs(num - exact));
      }
  }
  out.metrics.push_back({"caputo_power_rule_max_abs", worst_power});

  out.measured = worst_laplace;
  out.threshold = 1e-8;
  out.seconds = elapsed(start);
  out.pass = worst_laplace <= 1e-8 && worst_caputo <= 1e-4 && worst_power <= 1e-6;
  out.detail = "Mittag-Leffler Laplace " + fmt_g(worst_laplace) + " (1e-8), tempered Caputo Laplace " +
               fmt_g(worst_caputo) + " (1e-4), power rule " + fmt_g(worst_power) + " (1e-6)";
  return out;
}

// ---- 9 ------------------------------------------------------------------------

namespace {

// CDF of the inverse gamma density on [0, x_max] by the midpoint rule; the
// midpoints (i + 1/2) dx avoid integer a x for the step used here.
std::vector<double> inverse_gamma_cdf(const GammaParams& g, double t, InverseGammaForm form, double dx,
                                      double x_max) {
  std::vector<double> cdf{0.0};
  double acc = 0.0;
  for (double x = 0.5 * dx; x < x_max; x += dx) {
    acc += inverse_gamma_density(g, x, t, form, 1e-9).value * dx;
    cdf.push_back(acc);
  }
  return cdf;
}

double kolmogorov_distance(std::vector<double> samples, const std::vector<double>& cdf, double dx) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    const double x = i * dx;
    while (j < samples.size() && samples[j] <= x) ++j;
    worst = std::max(worst, std::fabs(j / n - cdf[i]));
  }
  return worst;
}

}  // namespace

CheckResult Validator::gamma_suite() {
  const auto start = clock_type::now();
  CheckResult out;
  out.criterion = 9;
  out.name = "gamma subordinator suite";
  bool pass = true;

  // density normalization
  {
    const GammaParams g{2.0, 3.0};
    boost::math::quadrature::tanh_sinh<double> ts;
    const double lo = ts.integrate([&](double x) { return x > 0.0 ? gamma_density(g, x, 0.7) : 0.0; }, 0.0, 1.0, 1e-14);
    boost::math::quadrature::exp_sinh<double> es;
    const double hi = es.integrate([&](double x) { return gamma_density(g, x, 0.7); }, 1.0,
                                   std::numeric_limits<double>::infinity(), 1e-14);
    const double dev = std::fabs(lo + hi - 1.0);
    out.metrics.push_back({"gamma_density_normalization", dev});
    pass = pass && dev <= 1e-8;
  }

  // shift identity: printed factor -a with shift 1/b, and with a and b exchanged
  {
    double printed_equal = 0.0, printed_unequal = 0.0, exchanged = 0.0;
    const std::pair<double, double> params[] = {{1.0, 1.0}, {2.0, 2.0}, {2.0, 3.0}, {0.5, 2.0}};
    for (const auto& [a, b] : params) {
      const GammaParams g{a, b};
      for (double x : {0.5, 1.0, 2.0})
        for (double t : {2.5, 3.5}) {
          const double h = 1e-5;
          const double dx = (gamma_density(g, x + h, t) - gamma_density(g, x - h, t)) / (2.0 * h);
          const double printed = -a * (gamma_density(g, x, t) - gamma_density(g, x, t - 1.0 / b));
          const double swapped = -b * (gamma_density(g, x, t) - gamma_density(g, x, t - 1.0 / a));
          (a == b ? printed_equal : printed_unequal) =
              std::max(a == b ? printed_equal : printed_unequal, std::fabs(dx - printed));
          exchanged = std::max(exchanged, std::fabs(dx - swapped));
        }
    }
    out.metrics.push_back({"shift_identity_printed_a_eq_b", printed_equal});
    out.metrics.push_back({"shift_identity_printed_a_ne_b", printed_unequal});
    out.metrics.push_back({"shift_identity_exchanged", exchanged});
    pass = pass && printed_equal <= 1e-4 && exchanged <= 1e-4;
  }

  // inverse gamma density: normalization and first-passage simulation
  {
    const GammaParams unit{1.0, 1.0};
    const std::vector<double> norm = inverse_gamma_cdf(unit, 1.0, InverseGammaForm::printed, 1e-3, 30.0);
    out.metrics.push_back({"inverse_density_normalization", std::fabs(norm.back() - 1.0)});
    pass = pass && std::fabs(norm.back() - 1.0) <= 1e-4;

    const double band = 1.5 / std::sqrt(static_cast<double>(setup_.gamma_paths));
    out.metrics.push_back({"kolmogorov_band", band});
    struct Point {
      GammaParams g;
      double t;
      const char* label;
    };
    const Point points[] = {{{1.0, 1.0}, 1.0, "b1_t1"}, {{1.0, 2.0}, 1.0, "b2_t1"}};
    std::uint64_t stream = 0xB000;
    for (const Point& pt : points) {
      std::vector<double> samples(setup_.gamma_paths);
      double sum = 0.0;
      for (long i = 0; i < setup_.gamma_paths; ++i) {
        Rng rng = path_stream(setup_.seed + stream, static_cast<std::uint64_t>(i));
        const InversePath path = gamma_inverse_path(pt.g, pt.t, 2e-3, rng);
        samples[i] = path.at(pt.t);
        sum += samples[i];
      }
      ++stream;
      const double dx = 5e-3;
      const double d_printed =
          kolmogorov_distance(samples, inverse_gamma_cdf(pt.g, pt.t, InverseGammaForm::printed, dx, 15.0), dx);
      const double d_scaled =
          kolmogorov_distance(samples, inverse_gamma_cdf(pt.g, pt.t, InverseGammaForm::time_scaled, dx, 15.0), dx);
      out.metrics.push_back({std::string("kolmogorov_printed_") + pt.label, d_printed});
      out.metrics.push_back({std::string("kolmogorov_time_scaled_") + pt.label, d_scaled});
      out.metrics.push_back({std::string("mean_first_passage_") + pt.label, sum / setup_.gamma_paths});
      pass = pass && d_scaled <= band;
      if (pt.g.b == 1.0 && pt.t == 1.0) pass = pass && d_printed <= band;
    }
  }
  out.measured = 0.0;
  for (const auto& [k, v] : out.metrics)
    if (k == "kolmogorov_printed_b1_t1") out.measured = v;
  out.threshold = 1.5 / std::sqrt(static_cast<double>(setup_.gamma_paths));
  out.seconds = elapsed(start);
  out.pass = pass;
  out.detail =
      "printed inverse density matches simulation only at b = t = 1; the form with e^{-bt} and "
      "e^{-y b t} matches at both points. The printed shift identity holds for a = b; with a and b "
      "exchanged it holds for all tested (a, b)";
  return out;
}

// ---- 10 -----------------------------------------------------------------------

CheckResult Validator::ambiguity() {
  const auto start = clock_type::now();
  CheckResult out;
  out.criterion = 10;
  out.name = "theta-power reading resolved by criteria 2 and 3";
  std::vector<std::string> passing;
  for (ThetaPowerReading r : {ThetaPowerReading::alpha, ThetaPowerReading::a}) {
    const CheckResult norm = normalization(r);
    const CheckResult mc = mc_agreement(r);
    out.metrics.push_back({std::string("normalization_dev_") + to_string(r), norm.measured});
    out.metrics.push_back({std::string("mc_max_z_") + to_string(r), mc.measured});
    if (norm.pass && mc.pass) passing.push_back(to_string(r));
  }
  out.measured = static_cast<double>(passing.size());
  out.threshold = 1.0;
  out.seconds = elapsed(start);
  out.pass = passing.size() == 1;
  out.detail = passing.size() == 1 ? "reading '" + passing.front() + "' passes; the other fails"
                                   : std::to_string(passing.size()) + " readings pass";
  return out;
}

CheckResult Validator::run(int criterion) {
  switch (criterion) {
    case 1: return degenerate_reduction();
    case 2: return normalization();
    case 3: return mc_agreement();
    case 4: return residuals();
    case 5: return mean_consistency();
    case 6: return busy_period();
    case 7: return inter_event();
    case 8: return special_functions();
    case 9: return gamma_suite();
    case 10: return ambiguity();
  }
  throw domain_error("unknown criterion " + std::to_string(criterion));
}

std::vector<CheckResult> Validator::run_all() {
  std::vector<CheckResult> out;
  for (int i = 1; i <= 10; ++i) out.push_back(run(i));
  return out;
}

}  // namespace erlq
