#include <doctest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numeric>

#include "erlq/base_queue.hpp"

using namespace erlq;

namespace {
QueueParams reference() { return {{0.6, 0.3}, 2, 1.2}; }
}  // namespace

TEST_CASE("phase index round trip") {
  for (int k : {1, 2, 5}) {
    CHECK(phase_index({0, 0}, k) == 0);
    for (long m = 0; m < 40; ++m) CHECK(phase_index(phase_inverse(m, k), k) == m);
  }
  CHECK(phase_inverse(3, 2) == StatePhase{2, 1});
  CHECK_THROWS_AS(phase_index({1, 0}, 2), domain_error);
  CHECK_THROWS_AS(phase_index({1, 3}, 2), domain_error);
  CHECK_THROWS_AS(phase_inverse(-1, 2), domain_error);
}

TEST_CASE("queue parameter invariants") {
  auto qp = reference();
  CHECK(qp.Lambda() == doctest::Approx(0.9));
  CHECK(qp.c(1) == doctest::Approx(2.0 / 3.0));
  CHECK(qp.mean_batch() == doctest::Approx(4.0 / 3.0));
  CHECK_THROWS_AS((QueueParams{{0.5, 0.0}, 1, 1.0}.validate()), domain_error);
  CHECK_THROWS_AS((QueueParams{{}, 1, 1.0}.validate()), domain_error);
  CHECK_THROWS_AS((QueueParams{{0.5}, 0, 1.0}.validate()), domain_error);
  CHECK_THROWS_AS((QueueParams{{0.5}, 1, -1.0}.validate()), domain_error);
}

TEST_CASE("generator rows conserve mass") {
  auto g = generator(reference(), 30);
  for (int j = 0; j <= g.cap; ++j) {
    double total = g.diagonal[j] + g.overflow[j];
    for (const auto& e : g.rows[j]) total += e.rate;
    CHECK(total == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("uniformization agrees with the matrix exponential") {
  const auto qp = reference();
  const int cap = 60;
  auto g = generator(qp, cap);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(cap + 2, cap + 2);
  for (int j = 0; j <= cap; ++j) {
    q(j, j) = g.diagonal[j];
    q(j, cap + 1) = g.overflow[j];
    for (const auto& e : g.rows[j]) q(j, e.col) += e.rate;
  }
  for (double t : {0.5, 2.0}) {
    Eigen::RowVectorXd p = Eigen::RowVectorXd::Zero(cap + 2);
    p(0) = 1.0;
    p = p * (q * t).exp();
    auto table = transient_uniformization(qp, t, cap, 1e-13);
    CHECK(table.status == Status::converged);
    for (std::size_t i = 0; i < table.states.size(); ++i)
      CHECK(table.probs[0][i] == doctest::Approx(p(table.states[i])).epsilon(1e-10));
    CHECK(table.lost_mass[0] == doctest::Approx(p(cap + 1)).epsilon(1e-8));
  }
}

TEST_CASE("state cap rule") {
  const auto qp = reference();
  const int cap = default_state_cap(qp, 2.0);
  CHECK(cap % (qp.k * qp.l()) == 0);
  CHECK(cap > 40.0 * (qp.Lambda() * 2.0 * qp.l() * qp.k + qp.k));
  CHECK(cap - qp.k * qp.l() <= 40.0 * (qp.Lambda() * 2.0 * qp.l() * qp.k + qp.k));
}

TEST_CASE("Gillespie paths reproduce the transient law") {
  const auto qp = reference();
  auto table = transient_uniformization(qp, 1.0, 80, 1e-12);
  Rng rng = path_stream(1, 0);
  const int n = 20000;
  std::vector<int> hits(4, 0);
  for (int i = 0; i < n; ++i) {
    auto path = simulate_gillespie(qp, 1.0, rng);
    const int m = path.at(1.0);
    if (m < 4) ++hits[m];
  }
  for (int m = 0; m < 4; ++m) {
    const double p = table.probs[0][m];
    CHECK(std::fabs(hits[m] / static_cast<double>(n) - p) < 4.0 * std::sqrt(p * (1 - p) / n));
  }
}

TEST_CASE("batch draws follow c_i") {
  const auto qp = reference();
  Rng rng = path_stream(2, 0);
  int ones = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) ones += draw_batch(qp, rng) == 1;
  const double p = qp.c(1);
  CHECK(std::fabs(ones / static_cast<double>(n) - p) < 4.0 * std::sqrt(p * (1 - p) / n));
}
