#include <doctest.h>

#include <cmath>

#include "erlq/analytics.hpp"
#include "erlq/montecarlo.hpp"

using namespace erlq;

namespace {
SimPlan small_plan() {
  SimPlan plan;
  plan.qp = {{0.6, 0.3}, 2, 1.2};
  plan.tp = {0.5, 0.7};
  plan.horizon = 1.0;
  plan.times = {0.5, 1.0};
  plan.n_paths = 4000;
  plan.step = 1e-2;
  plan.seed = 99;
  return plan;
}
}  // namespace

TEST_CASE("simulation does not depend on the worker count") {
  auto plan = small_plan();
  plan.n_paths = 500;
  auto one = simulate_time_changed(plan);
  plan.workers = 3;
  auto three = simulate_time_changed(plan);
  CHECK(one.raw_phases == three.raw_phases);
  CHECK(one.table.mean == three.table.mean);
}

TEST_CASE("identity time change reproduces the base queue") {
  auto plan = small_plan();
  plan.time_change = TimeChange::none;
  auto est = simulate_time_changed(plan).table;
  auto exact = transient_uniformization(plan.qp, plan.times, 80, 1e-12);
  for (std::size_t i = 0; i < plan.times.size(); ++i)
    for (long m = 0; m < 4; ++m) {
      const double p = exact.probs[i][m];
      CHECK(std::fabs(est.probs[i][m] - p) < 4.5 * std::sqrt(p * (1 - p) / plan.n_paths));
    }
}

TEST_CASE("time-changed estimates agree with the series") {
  auto plan = small_plan();
  auto est = simulate_time_changed(plan).table;
  SeriesContext ctx;
  ctx.qp = plan.qp;
  ctx.tp = plan.tp;
  SeriesEvaluator ev(ctx);
  for (long m = 0; m < 3; ++m) {
    const double p = ev.phase(m, 1.0).value;
    CHECK(std::fabs(est.probs[1][m] - p) < 4.5 * std::sqrt(p * (1 - p) / plan.n_paths) + 0.01);
  }
}

TEST_CASE("busy periods are recorded with censoring counts") {
  auto plan = small_plan();
  plan.n_paths = 1000;
  plan.horizon = 2.0;
  auto busy = simulate_busy_period(plan);
  CHECK(busy.samples.size() == 1000);
  CHECK(busy.cap == doctest::Approx(default_busy_cap(plan)));
  CHECK(busy.censored_fraction() >= 0.0);
  CHECK(busy.empirical_cdf(0.0) == 0.0);
  CHECK(busy.empirical_cdf(1e9) <= 1.0);
}

TEST_CASE("KS statistic and bands") {
  std::vector<double> u;
  for (int i = 0; i < 1000; ++i) u.push_back((i + 0.5) / 1000.0);
  auto ks = ks_statistic(u, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(ks.statistic == doctest::Approx(0.0005).epsilon(1e-6));
  CHECK(ks.pass);
  CHECK(ks.critical == doctest::Approx(std::sqrt(-std::log(0.025) / 2.0) / std::sqrt(1000.0)));
  auto bad = ks_statistic(u, [](double x) { return std::clamp(x * x, 0.0, 1.0); });
  CHECK_FALSE(bad.pass);
  CHECK(dkw_band(1000) == doctest::Approx(std::sqrt(std::log(2.0 / 0.05) / 2000.0)));
}

TEST_CASE("lag-one autocorrelation") {
  std::vector<double> alt;
  for (int i = 0; i < 100; ++i) alt.push_back(i % 2 ? 1.0 : -1.0);
  CHECK(lag1_autocorrelation(alt) == doctest::Approx(-1.0).epsilon(0.03));
}

TEST_CASE("inter-event samples need single arrivals") {
  auto plan = small_plan();
  CHECK_THROWS_AS(collect_inter_event_times(plan, 10), domain_error);
  plan.qp = {{0.8}, 2, 1.5};
  auto s = collect_inter_event_times(plan, 200);
  CHECK(s.arrival.size() == 200);
  CHECK(s.sojourn.size() == 200);
}

TEST_CASE("simulation plan validation") {
  auto plan = small_plan();
  plan.n_paths = 0;
  CHECK_THROWS_AS(plan.validate(), domain_error);
  CHECK_THROWS_AS(time_change_from_string("levy"), domain_error);
  CHECK(time_change_from_string("gamma") == TimeChange::gamma);
}
