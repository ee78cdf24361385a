#pragma once

#include <string>
#include <vector>

#include "erlq/rng.hpp"
#include "erlq/special_functions.hpp"

namespace erlq {

// Erlang queue fed by batch arrivals: batches of i customers arrive at rate
// lambdas[i-1]; each customer needs k exponential phases of rate k*mu.
struct QueueParams {
  std::vector<double> lambdas;
  int k = 1;
  double mu = 1.0;

  int l() const { return static_cast<int>(lambdas.size()); }
  double Lambda() const;
  // c_i = lambda_i / Lambda, i = 1..l
  double c(int i) const;
  // sum_i i c_i
  double mean_batch() const;
  // throws domain_error when the invariants fail
  void validate() const;
};

struct StatePhase {
  int n = 0;
  int s = 0;
  bool operator==(const StatePhase&) const = default;
};

// (0,0) -> 0 and (n,s) -> k(n-1)+s.
long phase_index(StatePhase sp, int k);
StatePhase phase_inverse(long m, int k);

enum class TableKind { analytic, uniformization, montecarlo };
const char* to_string(TableKind kind);

struct ProbabilityTable {
  std::vector<double> times;
  std::vector<long> states;                // phase indices
  std::vector<std::vector<double>> probs;  // [time][state]
  std::vector<std::vector<double>> err;    // truncation bound or standard error
  std::vector<double> lost_mass;           // per time; truncated tail or overflow
  TableKind kind = TableKind::analytic;
  Status status = Status::converged;
};

// Transition rates on phase counts 0..cap. Mass that would leave the window
// is routed to an absorbing overflow tracker with the given rate.
struct Generator {
  struct Entry {
    int col;
    double rate;
  };
  int cap = 0;
  std::vector<std::vector<Entry>> rows;
  std::vector<double> diagonal;
  std::vector<double> overflow;
};

Generator generator(const QueueParams& params, int cap);

// Smallest multiple of k*l strictly above 40*(Lambda*t_max*l*k + k).
int default_state_cap(const QueueParams& params, double t_max);

ProbabilityTable transient_uniformization(const QueueParams& params,
                                          const std::vector<double>& times, int cap,
                                          double tol);
ProbabilityTable transient_uniformization(const QueueParams& params, double t, int cap,
                                          double tol);

// Jump list of the phase count. times[0] = 0 and phases[0] = start; the count
// equals phases[i] on [times[i], times[i+1]).
struct Trajectory {
  std::vector<double> times;
  std::vector<int> phases;
  double horizon = 0.0;

  int at(double t) const;
};

Trajectory simulate_gillespie(const QueueParams& params, double horizon, Rng& rng,
                              int start = 0);

// Draws the batch size of one arrival, i with probability c_i.
int draw_batch(const QueueParams& params, Rng& rng);

}  // namespace erlq
