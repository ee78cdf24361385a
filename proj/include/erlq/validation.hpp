#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "erlq/analytics.hpp"
#include "erlq/montecarlo.hpp"

namespace erlq {

struct CheckResult {
  int criterion = 0;
  std::string name;
  bool pass = false;
  double measured = 0.0;   // headline number compared with the threshold
  double threshold = 0.0;
  double seconds = 0.0;
  std::string detail;
  std::vector<std::pair<std::string, double>> metrics;
};

// Reference parameter sets and sample sizes of the acceptance suite.
struct ValidationSetup {
  QueueParams batch;   // l = 2 reference queue
  QueueParams single;  // l = 1 reference queue
  TemperedStableParams tp{0.5, 0.7};
  SeriesConfig cfg;
  std::uint64_t seed = 20240611;
  long mc_paths = 100000;
  long busy_paths = 100000;
  long inter_event_samples = 10000;
  long gamma_paths = 100000;
  double step = 1e-3;
  int workers = 1;

  static ValidationSetup reference();
};

// Runs the acceptance criteria. The state-probability simulation is shared
// between criteria 3 and 10 and computed once.
class Validator {
 public:
  explicit Validator(ValidationSetup setup);

  const ValidationSetup& setup() const { return setup_; }

  CheckResult degenerate_reduction();                                      // 1
  CheckResult normalization(ThetaPowerReading r = ThetaPowerReading::a);   // 2
  CheckResult mc_agreement(ThetaPowerReading r = ThetaPowerReading::a);    // 3
  CheckResult residuals();                                                 // 4
  CheckResult mean_consistency();                                          // 5
  CheckResult busy_period();                                               // 6
  CheckResult inter_event();                                               // 7
  CheckResult special_functions();                                         // 8
  CheckResult gamma_suite();                                               // 9
  CheckResult ambiguity();                                                 // 10

  CheckResult run(int criterion);
  std::vector<CheckResult> run_all();

 private:
  SeriesContext context(const QueueParams& qp, ThetaPowerReading r) const;
  const StepHalving& state_simulation();

  ValidationSetup setup_;
  std::unique_ptr<StepHalving> sim_;
};

// Calendar CDF of an inter-event category: one minus the series survival,
// or the single-kernel form where the series no longer meets its tolerance.
// `fallbacks` counts evaluations that needed the single-kernel form.
double inter_event_cdf(const SeriesContext& ctx, InterEvent kind, double t, long* fallbacks = nullptr);

}  // namespace erlq
