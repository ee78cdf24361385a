#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "erlq/base_queue.hpp"
#include "erlq/subordinators.hpp"

namespace erlq {

enum class TimeChange { tempered, gamma, none };

const char* to_string(TimeChange c);
TimeChange time_change_from_string(const std::string& s);

struct SimPlan {
  QueueParams qp;
  TimeChange time_change = TimeChange::tempered;
  TemperedStableParams tp;
  GammaParams gp;
  double horizon = 1.0;        // calendar horizon
  long n_paths = 10000;
  double step = 1e-3;          // operational grid of the inverse path
  std::uint64_t seed = 1;
  std::vector<double> times;   // calendar times of the state estimates
  int busy_start = 0;          // a; 0 means k
  double busy_cap = 0.0;       // operational censoring cap; 0 picks the default
  int workers = 1;

  void validate() const;
};

struct EstimateTable : ProbabilityTable {
  long n_paths = 0;
  std::vector<double> mean, mean_stderr;  // phase count, per time
  long regenerated = 0;                   // paths redrawn for a short operational span
};

// Phase count of every path at every target time, raw_phases[path][time].
struct SimOutput {
  EstimateTable table;
  std::vector<std::vector<int>> raw_phases;
};

SimOutput simulate_time_changed(const SimPlan& plan);

// Estimates on the inverse-path grid with step/2 and on its coarsening to
// step, from the same random numbers.
struct StepHalving {
  EstimateTable fine, coarse;
  double max_shift_sigma = 0.0;  // max |fine - coarse| / std_err over states
};

StepHalving step_halving(const SimPlan& plan);

struct BusySamples {
  std::vector<double> samples;    // calendar busy periods; +inf when censored past the cap
  std::vector<double> operational;
  long op_censored = 0;           // absorption not reached before the cap
  long window_censored = 0;       // censored with D(cap) inside [0, horizon]
  double cap = 0.0;

  double censored_fraction() const;
  double empirical_cdf(double t) const;
};

// Default operational cap: 50 mean classical busy periods, or 50 calendar
// horizons when the base queue is not stable.
double default_busy_cap(const SimPlan& plan);

BusySamples simulate_busy_period(const SimPlan& plan);

struct InterEventSamples {
  std::vector<double> arrival, phase, sojourn;
};

// Calendar durations D(E) for operational exponential durations E (l = 1).
InterEventSamples collect_inter_event_times(const SimPlan& plan, long n);

struct KsResult {
  double statistic = 0.0;
  double critical = 0.0;
  bool pass = false;
  long n = 0;
};

// One-sample Kolmogorov-Smirnov test with the asymptotic critical value
// sqrt(-ln(level/2)/2)/sqrt(n).
KsResult ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf,
                      double level = 0.05);

// Half width of the DKW uniform band for an empirical CDF of n samples.
double dkw_band(long n, double level = 0.05);

double lag1_autocorrelation(const std::vector<double>& x);

}  // namespace erlq
