#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "erlq/base_queue.hpp"
#include "erlq/fractional_calculus.hpp"
#include "erlq/kernels.hpp"
#include "erlq/special_functions.hpp"
#include "erlq/subordinators.hpp"

namespace erlq {

// Which power of theta multiplies the first block of the state probabilities:
// a single theta^alpha, or theta^a inside the sum over the tempering index a.
enum class ThetaPowerReading { alpha, a };

// Index set of the correction block of the final-phase states (s = k).
// `shifted` uses only m + e_1 for the compositions m of the first block;
// `complete` uses every composition of weight n + r + 1.
enum class FinalPhaseRule { complete, shifted };

// A converged state probability below zero by more than its error bound.
class inconsistency_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

const char* to_string(ThetaPowerReading r);
const char* to_string(FinalPhaseRule r);

struct SeriesConfig {
  // Hard cap on the Pochhammer order of any kernel. Every index of the nested
  // sums (h, n, r, w and the composition sizes) is bounded by it.
  int order_cap = 600;
  // Cap on the inner sums: tempering index (a, b, c, m) and Mittag-Leffler terms.
  int term_cap = 20000;
  // Cap on the number of enumerated compositions.
  long composition_cap = 20000000;
  // Shell stopping rule.
  int shell_patience = 3;
  double tol = 1e-7;
  ThetaPowerReading theta_power = ThetaPowerReading::a;
  FinalPhaseRule final_phase = FinalPhaseRule::complete;
  // Added to beta_const; nonzero only to inject a fault for negative controls.
  double beta_shift = 0.0;

  void validate() const;
};

// Queue and time change; alpha = 1 (any theta) is the identity time change.
struct SeriesContext {
  QueueParams qp;
  TemperedStableParams tp;
  SeriesConfig cfg;

  double beta_const() const;
  void validate() const;
};

struct SeriesValue {
  double value = 0.0;
  double err = 0.0;
  Status status = Status::converged;
  int orders_used = 0;
};

// ---- coefficient ledger ---------------------------------------------------

struct IndexTuple {
  int n = 1, s = 1, r = 0, h = 1, w = 0;
  std::vector<int> m;        // first-block composition, sum_j j m_j - r = n
  std::vector<int> m_prime;  // zero-state composition, sum_j m'_j = w
};

// Factorial-bearing coefficients are kept as natural logarithms (all of them
// are nonnegative; a vanishing coefficient has log -inf).
struct CoefficientSet {
  int a = 0;       // a_r^{n,s}(m)
  double pi = 0;   // alpha (a - 1) + 1
  int gamma0 = 0;  // gamma^0_{h,w}(m')
  double log_C0 = 0;
  double beta0 = 0;
  double betaM = 0;
  double log_A = 0;
  double log_B = 0;
  double log_C = 0;
  int b = 0;
  double rho = 0;
  int c = 0;
  double delta = 0;
};

CoefficientSet coefficients(const SeriesContext& ctx, const IndexTuple& idx);

// ---- compositions -----------------------------------------------------------

// Calls visit(m) for every m in N_0^l with sum_j m_j <= max_size and
// sum_j j m_j <= max_weight, in lexicographic order.
template <class Visit>
long enumerate_compositions(int l, int max_size, int max_weight, Visit visit);

// All m with sum_j j m_j - r = n for some r >= 0, and size/weight caps.
std::vector<std::vector<int>> compositions_with_weight(int l, int weight);

// Aggregated composition weights
//   P[size][weight] = Lambda^size sum_{m : |m| = size, sum j m_j = weight} prod_i c_i^{m_i}/m_i!
// Everything in the series depends on m only through (size, weight).
struct CompositionTable {
  int max_size = 0, max_weight = 0;
  std::vector<std::vector<long double>> P;        // P[size][weight]
  std::vector<std::vector<long double>> shifted;  // same sums for m + e_1, keyed by m
  long visited = 0;
};

CompositionTable composition_table(const QueueParams& qp, int max_order, long cap);

// ---- series evaluation ------------------------------------------------------

// Caches the time-independent coefficient vectors (one entry per kernel
// order) and evaluates them against kernel tables. Not thread-safe; use one
// per thread. All free functions below build a private instance.
class SeriesEvaluator {
 public:
  explicit SeriesEvaluator(SeriesContext ctx);

  const SeriesContext& context() const { return ctx_; }

  SeriesValue zero_state(double t);
  SeriesValue state(int n, int s, double t);
  SeriesValue phase(long m, double t);
  SeriesValue mean(double t);
  SeriesValue busy_cdf(int a, double t);

  // Order-indexed coefficients, exposed for tests.
  const std::vector<long double>& zero_state_weights() const { return w0_; }
  struct StateCoefficients {
    std::vector<long double> first;     // multiplies G (or G_tilde)
    std::vector<long double> rest;      // multiplies G
    std::vector<long double> rest_abs;  // magnitude before cancellation
  };
  const StateCoefficients& state_coefficients(int n, int s);

 private:
  KernelTable& table(double t);
  SeriesValue contract(const std::vector<long double>* first, const std::vector<long double>& rest,
                       const std::vector<long double>* rest_abs, double t, int kind);

  SeriesContext ctx_;
  CompositionTable comp_;
  std::vector<long double> w0_;
  std::map<std::pair<int, int>, StateCoefficients> states_;
  std::map<int, std::vector<long double>> busy_;
  std::unique_ptr<KernelTable> table_;
  std::unique_ptr<KernelTable> mean_table_;
};

SeriesValue zero_state_prob(const SeriesContext& ctx, double t);
SeriesValue state_prob(const SeriesContext& ctx, int n, int s, double t);
SeriesValue queue_length_prob(const SeriesContext& ctx, long m, double t);
SeriesValue mean_queue_length(const SeriesContext& ctx, double t);
SeriesValue busy_period_cdf(const SeriesContext& ctx, int a, double t);

// Sum of u^m q_m(t) over phase counts up to `max_phase`, plus the
// truncation budget of the omitted tail.
SeriesValue pgf(const SeriesContext& ctx, double u, double t, long max_phase = -1);

// Table of q_m(t) for m = 0..max_phase on the given times. With max_phase < 0
// phases are added until the trailing probabilities fall below the tolerance.
ProbabilityTable analytic_table(const SeriesContext& ctx, const std::vector<double>& times,
                                long max_phase = -1);

// Compares the evaluation at the configured order cap with the one at half
// of it; returns false when they differ by more than the tolerance.
bool certify(const SeriesContext& ctx, double t);

// ---- inter-event laws (single arrivals) ------------------------------------

enum class InterEvent { arrival, phase, sojourn };

// Operational exit rate of the category: lambda, k mu or lambda + k mu.
double inter_event_rate(const SeriesContext& ctx, InterEvent kind);

// Survival sum_r (-rate)^r H_r(t; theta^alpha), the double series of the
// tempered Mittag-Leffler law.
SeriesValue inter_event_survival(const SeriesContext& ctx, InterEvent kind, double t);
SeriesValue interarrival_survival(const SeriesContext& ctx, double t);
SeriesValue interphase_survival(const SeriesContext& ctx, double t);
SeriesValue sojourn_survival(const SeriesContext& ctx, double t);

// Same law from the single-kernel form 1 - rate H_1(t; theta^alpha - rate).
SeriesValue survival_collapsed(const SeriesContext& ctx, double rate, double t);

// Largest t (on a 0.05 grid up to t_max) for which the survival series still
// meets the tolerance.
double survival_supported_range(const SeriesContext& ctx, InterEvent kind, double t_max = 50.0);

// ---- governing equations ----------------------------------------------------

struct ResidualReport {
  std::string equation;
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double derivative_err = 0.0;
  Status status = Status::converged;
};

// Sampled probabilities of the listed phase counts on a uniform grid.
struct ResidualGrid {
  double t_max = 2.0;
  int points = 2001;
};

// Equation classes of the state system, identified by a representative state.
// Residual of each chosen state's equation at each t.
std::vector<ResidualReport> system_residuals(const SeriesContext& ctx, const std::vector<double>& times,
                                             const std::vector<StatePhase>& states,
                                             ResidualGrid grid = {});

// Queue-length form of the same system at phase counts m.
std::vector<ResidualReport> queue_length_residuals(const SeriesContext& ctx,
                                                   const std::vector<double>& times,
                                                   const std::vector<long>& phases,
                                                   ResidualGrid grid = {});

// pgf equation u D G = (k mu (1-u) - Lambda u (1 - sum c_m u^{mk})) G - k mu (1-u) p_0.
std::vector<ResidualReport> pgf_residuals(const SeriesContext& ctx, const std::vector<double>& times,
                                          const std::vector<double>& us, ResidualGrid grid = {});

// |D M - k mu p_0 + k mu - k Lambda sum_i i c_i| at t.
ResidualReport mean_residual(const SeriesContext& ctx, double t, ResidualGrid grid = {});
double mean_residual_from(const SampledFunction& mean, const SampledFunction& p0,
                          const SeriesContext& ctx, double t);

// One representative state per equation class of the state system.
std::vector<StatePhase> representative_states(const QueueParams& qp);

// ---- single-arrival transcription ---------------------------------------------

// Independent transcription of the single-arrival formulas with their own
// notation (D, F, Z, d, f, z, ...). Used to cross-check the general machinery.
namespace single_arrival {

struct Coefficients {
  int d = 0;         // first block order
  double log_D = 0;  // first block coefficient
  int delta0 = 0;    // zero-state order
  double log_Z0 = 0; // zero-state coefficient
  int f = 0;         // second block order
  double log_F = 0;
  int z = 0;         // third block order
  double log_Z = 0;
  double zeta = 0;   // alpha (f - 1) + 1
  double eta = 0;    // alpha (z - 1) + 1
  double pi = 0;     // alpha (d - 1) + 1
};

Coefficients coefficients(const SeriesContext& ctx, int n, int s, int r, int h, int w);
SeriesValue zero_state_prob(const SeriesContext& ctx, double t);
SeriesValue state_prob(const SeriesContext& ctx, int n, int s, double t);

}  // namespace single_arrival

// ---- template implementation ------------------------------------------------

namespace detail {
template <class Visit>
void enumerate_rec(std::vector<int>& m, int level, int size_left, int weight_left, long& count,
                   Visit& visit) {
  const int l = static_cast<int>(m.size());
  if (level == l) {
    ++count;
    visit(static_cast<const std::vector<int>&>(m));
    return;
  }
  const int j = level + 1;
  for (int v = 0; v <= size_left && v * j <= weight_left; ++v) {
    m[level] = v;
    enumerate_rec(m, level + 1, size_left - v, weight_left - v * j, count, visit);
  }
  m[level] = 0;
}
}  // namespace detail

template <class Visit>
long enumerate_compositions(int l, int max_size, int max_weight, Visit visit) {
  std::vector<int> m(l, 0);
  long count = 0;
  if (max_size < 0 || max_weight < 0) return 0;
  detail::enumerate_rec(m, 0, max_size, max_weight, count, visit);
  return count;
}

}  // namespace erlq
