#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "erlq/analytics.hpp"
#include "erlq/montecarlo.hpp"
#include "erlq/validation.hpp"

namespace erlq {

struct SimulationSettings {
  long n_paths = 10000;
  double step = 1e-3;
  int workers = 1;
  int busy_start = 0;  // 0 means k
  double busy_cap = 0.0;
  long inter_event_samples = 10000;
  bool step_halving = true;
};

struct ValidationSettings {
  std::vector<int> criteria{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  long mc_paths = 100000;
  long busy_paths = 100000;
  long inter_event_samples = 10000;
  long gamma_paths = 100000;
};

// Everything a CLI run needs. Parsed from a JSON document whose objects may
// only contain the documented keys.
struct RunConfig {
  QueueParams qp;
  TimeChange time_change = TimeChange::tempered;
  TemperedStableParams tp{0.5, 0.7};
  GammaParams gp;
  SeriesConfig series;
  std::vector<double> times{0.5, 1.0, 2.0};
  long max_phase = -1;  // -1: until the tail is below the tolerance
  bool uniformization_limit = false;
  SimulationSettings sim;
  ValidationSettings validation;
  std::string output_dir = "out";
  std::uint64_t seed = 1;

  void validate() const;

  // Context for the closed-form series; the identity time change maps to
  // theta = 0, alpha = 1.
  SeriesContext series_context() const;
  SimPlan sim_plan() const;
  ValidationSetup validation_setup() const;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& cfg);

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace erlq
