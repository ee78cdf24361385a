#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "erlq/analytics.hpp"

using namespace erlq;

namespace {

SeriesContext reference_ctx() {
  SeriesContext ctx;
  ctx.qp = {{0.6, 0.3}, 2, 1.2};
  ctx.tp = {0.5, 0.7};
  return ctx;
}

SeriesContext single_ctx() {
  SeriesContext ctx;
  ctx.qp = {{0.8}, 2, 1.5};
  ctx.tp = {0.5, 0.7};
  return ctx;
}

// Talbot inversion of the composed resolvent, 30 digits, 120 phases
struct Oracle {
  double t;
  std::map<long, double> q;
  double mean;
};

const Oracle oracles[] = {
    {0.5,
     {{0, 0.5806292334172038},
      {1, 0.07367647181630542},
      {2, 0.1274235639755834},
      {3, 0.054619344239606765},
      {4, 0.0796736476561716},
      {5, 0.024528478114060642},
      {8, 0.010587038063147652}},
     1.3762841954311738},
    {1.0,
     {{0, 0.4554929793247539},
      {1, 0.08926151358288732},
      {2, 0.1321035429708097},
      {3, 0.07377100144778821},
      {4, 0.09037939400969243},
      {5, 0.04252008831935614},
      {8, 0.01940453764076195}},
     2.0776570823715694},
    {2.0,
     {{0, 0.33869619970129566},
      {1, 0.08992211364153067},
      {2, 0.12370177878320314},
      {3, 0.08361442865522399},
      {4, 0.09504202441756508},
      {5, 0.059027411791298584},
      {8, 0.03204780561248364}},
     3.101634078997756},
};

}  // namespace

TEST_CASE("phase probabilities match the transform oracle") {
  SeriesEvaluator ev(reference_ctx());
  for (const auto& o : oracles) {
    for (const auto& [m, q] : o.q) {
      CAPTURE(o.t);
      CAPTURE(m);
      auto v = ev.phase(m, o.t);
      CHECK(v.status == Status::converged);
      CHECK(std::fabs(v.value - q) < 1e-8);
      CHECK(std::fabs(v.value - q) <= v.err + 1e-10);
    }
  }
}

TEST_CASE("mean phase count matches the transform oracle") {
  SeriesEvaluator ev(reference_ctx());
  for (const auto& o : oracles) {
    auto v = ev.mean(o.t);
    CAPTURE(o.t);
    CHECK(v.status == Status::converged);
    CHECK(std::fabs(v.value - o.mean) < 1e-7);
  }
}

TEST_CASE("busy period CDF matches the absorption oracle") {
  const std::pair<double, double> ref[] = {{0.1, 0.10284009923447303}, {0.25, 0.23503250731383676},
                                           {0.5, 0.3745807441146624},  {1.0, 0.5215462226195344},
                                           {1.5, 0.6009246965375197},  {2.0, 0.6521427514952991}};
  SeriesEvaluator ev(reference_ctx());
  for (auto [t, f] : ref) {
    CAPTURE(t);
    auto v = ev.busy_cdf(2, t);
    CHECK(v.status == Status::converged);
    CHECK(std::fabs(v.value - f) < 1e-8);
    CHECK(std::fabs(v.value - f) <= v.err + 1e-10);
  }
}

TEST_CASE("the other theta-power reading is inconsistent") {
  auto ctx = reference_ctx();
  ctx.cfg.theta_power = ThetaPowerReading::alpha;
  auto table = analytic_table(ctx, {1.0}, 60);
  double total = 0.0;
  for (double p : table.probs[0]) total += p;
  CHECK(std::fabs(total - 1.0) > 1e-2);
}

TEST_CASE("table probabilities are normalized") {
  auto table = analytic_table(reference_ctx(), {0.5, 2.0});
  CHECK(table.status == Status::converged);
  for (std::size_t i = 0; i < table.times.size(); ++i) {
    const double total = std::accumulate(table.probs[i].begin(), table.probs[i].end(), 0.0) + table.lost_mass[i];
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("pgf at u = 1 is the total mass") {
  auto v = pgf(reference_ctx(), 1.0, 1.0);
  CHECK(v.value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("alpha = 1 recovers the base queue") {
  auto ctx = reference_ctx();
  ctx.tp = {0.0, 1.0};
  auto base = transient_uniformization(ctx.qp, 0.8, 80, 1e-13);
  SeriesEvaluator ev(ctx);
  for (long m = 0; m < 10; ++m) CHECK(std::fabs(ev.phase(m, 0.8).value - base.probs[0][m]) < 1e-9);
}

TEST_CASE("single-arrival transcription agrees with the general series") {
  auto ctx = single_ctx();
  for (double t : {0.3, 1.0}) {
    CHECK(single_arrival::zero_state_prob(ctx, t).value == doctest::Approx(zero_state_prob(ctx, t).value).epsilon(1e-9));
    for (auto [n, s] : {std::pair{1, 1}, {1, 2}, {2, 1}, {3, 2}}) {
      CAPTURE(t);
      CAPTURE(n);
      CAPTURE(s);
      auto lit = single_arrival::state_prob(ctx, n, s, t);
      auto gen = state_prob(ctx, n, s, t);
      CHECK(std::fabs(lit.value - gen.value) < 1e-8);
      CHECK(std::fabs(lit.value - gen.value) <= lit.err + gen.err);
    }
  }
}

TEST_CASE("coefficient ledger on a small index tuple") {
  auto ctx = reference_ctx();
  IndexTuple idx;
  idx.n = 2;
  idx.s = 1;
  idx.r = 0;
  idx.h = 1;
  idx.w = 1;
  idx.m = {0, 1};
  idx.m_prime = {1, 0};
  auto c = coefficients(ctx, idx);
  CHECK(c.a == 1 + ctx.qp.k * 1 - 1 + 1);
  CHECK(c.pi == doctest::Approx(ctx.tp.alpha * (c.a - 1) + 1));
  CHECK(std::isfinite(c.log_C0));
  CHECK(c.b == c.a + c.gamma0);
  idx.m = {1, 1};
  CHECK_THROWS_AS(coefficients(ctx, idx), domain_error);
}

TEST_CASE("composition table aggregates the enumeration") {
  const QueueParams qp{{0.6, 0.3, 0.2}, 1, 1.0};
  auto table = composition_table(qp, 9, 1000000);
  std::vector<std::vector<long double>> brute(10, std::vector<long double>(10, 0.0L));
  long count = enumerate_compositions(3, 9, 9, [&](const std::vector<int>& m) {
    int size = 0, weight = 0;
    long double w = 1.0L;
    for (int j = 0; j < 3; ++j) {
      size += m[j];
      weight += (j + 1) * m[j];
      w *= std::pow(static_cast<long double>(qp.lambdas[j]), m[j]) / std::tgamma(m[j] + 1.0L);
    }
    brute[size][weight] += w;
  });
  CHECK(count > 0);
  for (int s = 0; s <= 9; ++s)
    for (int w = 0; w <= 9; ++w)
      if (static_cast<std::size_t>(w) >= table.P[s].size())
        CHECK(brute[s][w] == 0.0L);
      else
        CHECK(static_cast<double>(table.P[s][w]) == doctest::Approx(static_cast<double>(brute[s][w])).epsilon(1e-14));
}

TEST_CASE("composition enumeration counts") {
  // compositions of l = 2 with size <= 3 and weight <= 4: enumerated by hand
  long count = enumerate_compositions(2, 3, 4, [](const std::vector<int>&) {});
  CHECK(count == 8);
  CHECK(compositions_with_weight(2, 4).size() == 3);
}

TEST_CASE("survival series and collapsed kernel agree") {
  auto ctx = single_ctx();
  for (double t : {0.2, 1.0}) {
    auto printed = interarrival_survival(ctx, t);
    auto collapsed = survival_collapsed(ctx, inter_event_rate(ctx, InterEvent::arrival), t);
    CHECK(printed.value == doctest::Approx(collapsed.value).epsilon(1e-9));
  }
  CHECK(inter_event_rate(ctx, InterEvent::sojourn) == doctest::Approx(0.8 + 3.0));
}

TEST_CASE("series certification at the reference point") { CHECK(certify(reference_ctx(), 1.0)); }

TEST_CASE("mean equation residual") {
  auto r = mean_residual(reference_ctx(), 1.0, {1.0, 1001});
  CHECK(r.residual < 1e-3);
}

TEST_CASE("invalid series settings are rejected") {
  auto ctx = reference_ctx();
  ctx.cfg.tol = -1.0;
  CHECK_THROWS_AS(ctx.validate(), domain_error);
  ctx = reference_ctx();
  ctx.cfg.beta_shift = NAN;
  CHECK_THROWS_AS(ctx.validate(), domain_error);
}

TEST_CASE("order cap exhaustion is reported") {
  auto ctx = reference_ctx();
  ctx.cfg.order_cap = 8;
  auto v = state_prob(ctx, 1, 1, 2.0);
  CHECK(v.status == Status::unconverged);
}

TEST_CASE("single-arrival coefficients equal the general ledger") {
  auto ctx = single_ctx();
  Rng rng = path_stream(404, 0);
  std::uniform_int_distribution<int> small(0, 6);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + small(rng), s = 1 + small(rng) % ctx.qp.k, r = small(rng), h = 1 + small(rng), w = small(rng);
    CAPTURE(n);
    CAPTURE(s);
    CAPTURE(r);
    CAPTURE(h);
    CAPTURE(w);
    IndexTuple idx{n, s, r, h, w, {n + r}, {w}};
    const auto g = coefficients(ctx, idx);
    const auto d = single_arrival::coefficients(ctx, n, s, r, h, w);
    CHECK(d.d == g.a);
    CHECK(d.delta0 == g.gamma0);
    CHECK(d.f == g.b);
    CHECK(d.z == g.c);
    CHECK(d.pi == doctest::Approx(g.pi));
    CHECK(d.zeta == doctest::Approx(g.rho));
    CHECK(d.eta == doctest::Approx(g.delta));
    CHECK(d.log_D == doctest::Approx(g.log_A).epsilon(1e-12));
    CHECK(d.log_Z0 == doctest::Approx(g.log_C0).epsilon(1e-12));
    CHECK(d.log_F == doctest::Approx(g.log_B).epsilon(1e-12));
    CHECK(d.log_Z == doctest::Approx(g.log_C).epsilon(1e-12));
  }
}

TEST_CASE("a shifted argument coefficient breaks normalization") {
  auto ctx = reference_ctx();
  ctx.cfg.beta_shift = 0.3;
  auto table = analytic_table(ctx, {1.0}, 60);
  const double total = std::accumulate(table.probs[0].begin(), table.probs[0].end(), 0.0);
  CHECK(std::fabs(total - 1.0) > 1e-3);
}

TEST_CASE("initial conditions") {
  SeriesEvaluator ev(reference_ctx());
  CHECK(ev.zero_state(0.0).value == doctest::Approx(1.0));
  CHECK(ev.state(1, 1, 0.0).value == doctest::Approx(0.0));
  CHECK(ev.state(2, 2, 0.0).value == doctest::Approx(0.0));
}
