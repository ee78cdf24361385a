// Command-line driver: transient probabilities, mean, busy period and
// inter-event laws of the time-changed Erlang queue, plus the simulation and
// validation runs.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "erlq/analytics.hpp"
#include "erlq/config.hpp"
#include "erlq/csv.hpp"
#include "erlq/montecarlo.hpp"
#include "erlq/validation.hpp"

namespace fs = std::filesystem;
using namespace erlq;
using nlohmann::json;

namespace {

enum class Method { analytic, mc, both };

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool strict = false;
  std::string method = "analytic";
  std::string reading;
  int busy_start = 0;
  std::vector<int> criteria;
};

enum ExitCode { ok = 0, validation_failed = 1, unconverged = 2, bad_input = 3 };

Method method_of(const Options& o) {
  if (o.method == "mc") return Method::mc;
  if (o.method == "both") return Method::both;
  return Method::analytic;
}

bool wants_analytic(Method m) { return m != Method::mc; }
bool wants_mc(Method m) { return m != Method::analytic; }

RunConfig resolve(const Options& o) {
  RunConfig cfg = o.config.empty() ? parse_config(json{{"queue", {{"lambdas", {0.6, 0.3}}, {"k", 2}, {"mu", 1.2}}}})
                                   : load_config(o.config);
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (o.seed) cfg.seed = *o.seed;
  if (o.reading == "alpha") cfg.series.theta_power = ThetaPowerReading::alpha;
  if (o.reading == "a") cfg.series.theta_power = ThetaPowerReading::a;
  if (o.busy_start > 0) cfg.sim.busy_start = o.busy_start;
  cfg.validate();
  fs::create_directories(cfg.output_dir);
  return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& name) { return (fs::path(cfg.output_dir) / name).string(); }

void require_series(const RunConfig& cfg) {
  if (cfg.time_change == TimeChange::gamma)
    throw config_error("closed-form series are available for the tempered stable and identity time changes only; "
                       "use --method mc with the gamma time change");
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

int run_probs(const RunConfig& cfg, Method method) {
  CsvWriter csv(out_path(cfg, "probs.csv"), {"t", "n", "s", "phase_index", "prob", "err", "method", "status"});
  int code = ok;
  auto emit = [&](const ProbabilityTable& table, const char* label) {
    for (std::size_t i = 0; i < table.times.size(); ++i)
      for (std::size_t j = 0; j < table.states.size(); ++j) {
        const long m = table.states[j];
        const StatePhase sp = phase_inverse(m, cfg.qp.k);
        csv << table.times[i] << sp.n << sp.s << m << table.probs[i][j] << table.err[i][j] << label
            << to_string(table.status);
      }
    if (table.status != Status::converged) code = unconverged;
  };
  if (wants_analytic(method)) {
    require_series(cfg);
    emit(analytic_table(cfg.series_context(), cfg.times, cfg.max_phase), "analytic");
  }
  if (wants_mc(method)) emit(simulate_time_changed(cfg.sim_plan()).table, "mc");
  if (cfg.uniformization_limit) {
    const double t_max = *std::max_element(cfg.times.begin(), cfg.times.end());
    emit(transient_uniformization(cfg.qp, cfg.times, default_state_cap(cfg.qp, t_max), cfg.series.tol),
         "uniformization");
  }
  return code;
}

int run_mean(const RunConfig& cfg) {
  require_series(cfg);
  const SeriesContext ctx = cfg.series_context();
  SeriesEvaluator ev(ctx);
  const ProbabilityTable table = analytic_table(ctx, cfg.times, cfg.max_phase);
  CsvWriter csv(out_path(cfg, "mean.csv"), {"t", "mean_phases", "err", "residual", "mean_customers"});
  int code = table.status == Status::converged ? ok : unconverged;
  for (std::size_t i = 0; i < cfg.times.size(); ++i) {
    const double t = cfg.times[i];
    const SeriesValue m = ev.mean(t);
    double customers = 0.0;
    for (std::size_t j = 0; j < table.states.size(); ++j)
      customers += table.probs[i][j] * static_cast<double>((table.states[j] + cfg.qp.k - 1) / cfg.qp.k);
    const double residual = t > 0.0 ? mean_residual(ctx, t, {t, 1001}).residual : NAN;
    csv << t << m.value << m.err << residual << customers;
    if (m.status != Status::converged) code = unconverged;
  }
  return code;
}

int run_busy(const RunConfig& cfg, Method method) {
  SimPlan plan = cfg.sim_plan();
  const int a = cfg.sim.busy_start > 0 ? cfg.sim.busy_start : cfg.qp.k;
  std::optional<BusySamples> busy;
  if (wants_mc(method)) busy = simulate_busy_period(plan);
  std::optional<SeriesEvaluator> ev;
  if (wants_analytic(method)) {
    require_series(cfg);
    ev.emplace(cfg.series_context());
  }
  CsvWriter csv(out_path(cfg, "busy.csv"), {"t", "a", "cdf", "err", "mc_cdf", "mc_stderr"});
  int code = ok;
  for (double t : cfg.times) {
    double cdf = NAN, err = NAN, mc = NAN, se = NAN;
    if (ev) {
      const SeriesValue v = ev->busy_cdf(a, t);
      cdf = v.value;
      err = v.err;
      if (v.status != Status::converged) code = unconverged;
    }
    if (busy) {
      mc = busy->empirical_cdf(t);
      se = std::sqrt(mc * (1.0 - mc) / static_cast<double>(busy->samples.size()));
    }
    csv << t << a << cdf << err << mc << se;
  }
  if (busy) {
    CsvWriter raw(out_path(cfg, "busy_samples.csv"), {"path", "calendar", "operational"});
    for (std::size_t i = 0; i < busy->samples.size(); ++i)
      raw << static_cast<long>(i) << busy->samples[i] << busy->operational[i];
    write_json(out_path(cfg, "busy_summary.json"), {{"cap", busy->cap},
                                                    {"operationally_censored", busy->op_censored},
                                                    {"window_censored", busy->window_censored},
                                                    {"censored_fraction", busy->censored_fraction()}});
  }
  return code;
}

int run_interevent(const RunConfig& cfg, Method method) {
  if (cfg.qp.l() != 1) throw config_error("inter-event laws need a single arrival rate");
  require_series(cfg);
  const SeriesContext ctx = cfg.series_context();
  const std::pair<InterEvent, const char*> kinds[] = {
      {InterEvent::arrival, "arrival"}, {InterEvent::phase, "phase"}, {InterEvent::sojourn, "sojourn"}};
  CsvWriter csv(out_path(cfg, "interevent.csv"), {"t", "kind", "survival", "err", "form", "status"});
  int code = ok;
  for (auto [kind, name] : kinds)
    for (double t : cfg.times) {
      SeriesValue v = inter_event_survival(ctx, kind, t);
      const char* form = "series";
      if (v.status != Status::converged) {
        v = survival_collapsed(ctx, inter_event_rate(ctx, kind), t);
        form = "collapsed";
      }
      if (v.status != Status::converged) code = unconverged;
      csv << t << name << v.value << v.err << form << to_string(v.status);
    }
  if (wants_mc(method)) {
    const InterEventSamples s = collect_inter_event_times(cfg.sim_plan(), cfg.sim.inter_event_samples);
    json ks;
    CsvWriter raw(out_path(cfg, "interevent_samples.csv"), {"kind", "sample", "duration"});
    for (auto [kind, name] : kinds) {
      const auto& v = kind == InterEvent::arrival ? s.arrival : kind == InterEvent::phase ? s.phase : s.sojourn;
      for (std::size_t i = 0; i < v.size(); ++i) raw << name << static_cast<long>(i) << v[i];
      const KsResult r = ks_statistic(v, [&, kind = kind](double t) { return inter_event_cdf(ctx, kind, t); });
      ks[name] = {{"statistic", r.statistic},
                  {"critical", r.critical},
                  {"pass", r.pass},
                  {"n", r.n},
                  {"lag1_autocorrelation", lag1_autocorrelation(v)}};
    }
    write_json(out_path(cfg, "interevent_ks.json"), ks);
  }
  return code;
}

int run_simulate(const RunConfig& cfg) {
  const SimPlan plan = cfg.sim_plan();
  const SimOutput sim = simulate_time_changed(plan);
  const EstimateTable& est = sim.table;
  CsvWriter csv(out_path(cfg, "estimates.csv"), {"t", "n", "s", "phase_index", "prob", "stderr"});
  for (std::size_t i = 0; i < est.times.size(); ++i)
    for (std::size_t j = 0; j < est.states.size(); ++j) {
      const StatePhase sp = phase_inverse(est.states[j], cfg.qp.k);
      csv << est.times[i] << sp.n << sp.s << est.states[j] << est.probs[i][j] << est.err[i][j];
    }
  CsvWriter raw(out_path(cfg, "raw_phases.csv"), {"path", "t", "phase_index"});
  for (std::size_t p = 0; p < sim.raw_phases.size(); ++p)
    for (std::size_t i = 0; i < plan.times.size(); ++i) raw << static_cast<long>(p) << plan.times[i] << sim.raw_phases[p][i];
  json summary = {{"n_paths", est.n_paths},
                  {"regenerated", est.regenerated},
                  {"times", est.times},
                  {"mean_phases", est.mean},
                  {"mean_stderr", est.mean_stderr},
                  {"config", to_json(cfg)}};
  if (cfg.sim.step_halving) summary["step_halving_shift_sigma"] = step_halving(plan).max_shift_sigma;
  write_json(out_path(cfg, "simulation.json"), summary);
  return est.status == Status::converged ? ok : unconverged;
}

int run_validate(const RunConfig& cfg, const Options& o) {
  Validator v(cfg.validation_setup());
  const std::vector<int> criteria = o.criteria.empty() ? cfg.validation.criteria : o.criteria;
  json results = json::array();
  int failures = 0;
  for (int c : criteria) {
    const ThetaPowerReading reading = cfg.series.theta_power;
    const CheckResult r = c == 2 ? v.normalization(reading) : c == 3 ? v.mc_agreement(reading) : v.run(c);
    std::printf("criterion %2d %s: %s (measured %.4g, threshold %.4g)\n", r.criterion, r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.measured, r.threshold);
    std::fflush(stdout);
    json metrics = json::object();
    for (const auto& [key, value] : r.metrics) metrics[key] = std::isfinite(value) ? json(value) : json(nullptr);
    results.push_back({{"criterion", r.criterion},
                       {"name", r.name},
                       {"pass", r.pass},
                       {"measured", r.measured},
                       {"threshold", r.threshold},
                       {"seconds", r.seconds},
                       {"detail", r.detail},
                       {"metrics", metrics}});
    if (!r.pass) ++failures;
  }
  write_json(out_path(cfg, "validation.json"), {{"results", results},
                                                  {"failures", failures},
                                                  {"theta_power_reading", to_string(cfg.series.theta_power)}});
  return failures > 0 && o.strict ? validation_failed : ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transient analysis of the time-changed Erlang queue with batch arrivals"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "output directory (overrides output_dir)");
  app.add_option("--seed", o.seed, "random seed (overrides seed)");
  app.add_flag("--strict", o.strict, "nonzero exit status when a validation criterion fails");
  app.add_option("--method", o.method, "analytic, mc or both")->check(CLI::IsMember({"analytic", "mc", "both"}));
  app.add_option("--theta-power-reading", o.reading, "alpha or a")->check(CLI::IsMember({"alpha", "a"}));

  auto* probs = app.add_subcommand("probs", "phase-count probabilities");
  auto* mean = app.add_subcommand("mean", "mean phase count and mean number of customers");
  auto* busy = app.add_subcommand("busy", "busy-period distribution");
  busy->add_option("--start", o.busy_start, "initial phase count (a multiple of k)");
  auto* inter = app.add_subcommand("interevent", "inter-arrival, inter-phase and sojourn laws");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates and raw samples");
  auto* validate = app.add_subcommand("validate", "acceptance criteria");
  validate->add_option("--criteria", o.criteria, "criterion numbers (default: from the configuration)");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = resolve(o);
    const Method method = method_of(o);
    const auto start = std::chrono::steady_clock::now();
    int code = ok;
    if (*probs) code = run_probs(cfg, method);
    else if (*mean) code = run_mean(cfg);
    else if (*busy) code = run_busy(cfg, method);
    else if (*inter) code = run_interevent(cfg, method);
    else if (*simulate) code = run_simulate(cfg);
    else if (*validate) code = run_validate(cfg, o);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::fprintf(stderr, "wrote %s (%.2fs)%s\n", cfg.output_dir.c_str(), secs,
                 code == unconverged ? "; some values did not converge" : "");
    return code;
  } catch (const config_error& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return bad_input;
  } catch (const domain_error& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return bad_input;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return bad_input;
  }
}
