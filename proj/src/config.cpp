#include "erlq/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace erlq {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw config_error(where + ": expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : j.items())
    if (!keys.count(item.key())) throw config_error(where + ": unknown key '" + item.key() + "'");
}

template <class T>
T get(const json& j, const std::string& where, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw config_error("");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw config_error("");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw config_error("");
    } else {
      if (!v.is_string()) throw config_error("");
    }
    return v.get<T>();
  } catch (const std::exception&) {
    throw config_error(where + "." + key + ": wrong type");
  }
}

std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw config_error(where + ": expected an array of numbers");
  std::vector<double> out;
  for (const json& v : j) {
    if (!v.is_number()) throw config_error(where + ": expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  try {
    qp.validate();
    series.validate();
    if (time_change == TimeChange::tempered) tp.validate();
    if (time_change == TimeChange::gamma) gp.validate();
    sim_plan().validate();
  } catch (const domain_error& e) {
    throw config_error(e.what());
  }
  if (times.empty()) throw config_error("times: at least one time is required");
  for (double t : times)
    if (!(t >= 0.0) || !std::isfinite(t)) throw config_error("times: entries must be finite and nonnegative");
  if (max_phase < -1) throw config_error("max_phase must be -1 or nonnegative");
  for (int c : validation.criteria)
    if (c < 1 || c > 10) throw config_error("validation.criteria: entries must lie in 1..10");
  if (validation.mc_paths < 1 || validation.busy_paths < 1 || validation.inter_event_samples < 3 ||
      validation.gamma_paths < 1)
    throw config_error("validation: sample sizes must be positive");
}

SeriesContext RunConfig::series_context() const {
  SeriesContext ctx;
  ctx.qp = qp;
  ctx.cfg = series;
  ctx.tp = time_change == TimeChange::tempered ? tp : TemperedStableParams{0.0, 1.0};
  return ctx;
}

SimPlan RunConfig::sim_plan() const {
  SimPlan plan;
  plan.qp = qp;
  plan.time_change = time_change;
  plan.tp = tp;
  plan.gp = gp;
  plan.horizon = times.empty() ? 1.0 : std::max(*std::max_element(times.begin(), times.end()), 1e-9);
  plan.n_paths = sim.n_paths;
  plan.step = sim.step;
  plan.seed = seed;
  plan.times = times;
  plan.busy_start = sim.busy_start;
  plan.busy_cap = sim.busy_cap;
  plan.workers = sim.workers;
  return plan;
}

ValidationSetup RunConfig::validation_setup() const {
  ValidationSetup s = ValidationSetup::reference();
  s.cfg = series;
  s.seed = seed;
  s.mc_paths = validation.mc_paths;
  s.busy_paths = validation.busy_paths;
  s.inter_event_samples = validation.inter_event_samples;
  s.gamma_paths = validation.gamma_paths;
  s.step = sim.step;
  s.workers = sim.workers;
  return s;
}

RunConfig parse_config(const json& doc) {
  require_object(doc, "config",
                 {"queue", "time_change", "series", "times", "max_phase", "uniformization_limit", "simulation",
                  "validation", "output_dir", "seed"});
  RunConfig cfg;
  if (!doc.contains("queue")) throw config_error("config: 'queue' is required");
  const json& q = doc.at("queue");
  require_object(q, "queue", {"lambdas", "k", "mu"});
  if (!q.contains("lambdas") || !q.contains("k") || !q.contains("mu"))
    throw config_error("queue: 'lambdas', 'k' and 'mu' are required");
  cfg.qp.lambdas = number_list(q.at("lambdas"), "queue.lambdas");
  cfg.qp.k = get<int>(q, "queue", "k", 1);
  cfg.qp.mu = get<double>(q, "queue", "mu", 1.0);

  if (doc.contains("time_change")) {
    const json& tc = doc.at("time_change");
    require_object(tc, "time_change", {"kind", "theta", "alpha", "a", "b"});
    try {
      cfg.time_change = time_change_from_string(get<std::string>(tc, "time_change", "kind", "tempered"));
    } catch (const domain_error& e) {
      throw config_error(std::string("time_change.kind: ") + e.what());
    }
    cfg.tp.theta = get<double>(tc, "time_change", "theta", cfg.tp.theta);
    cfg.tp.alpha = get<double>(tc, "time_change", "alpha", cfg.tp.alpha);
    cfg.gp.a = get<double>(tc, "time_change", "a", cfg.gp.a);
    cfg.gp.b = get<double>(tc, "time_change", "b", cfg.gp.b);
  }

  if (doc.contains("series")) {
    const json& s = doc.at("series");
    require_object(s, "series",
                   {"order_cap", "term_cap", "composition_cap", "shell_patience", "tol", "theta_power",
                    "final_phase", "beta_shift"});
    SeriesConfig& c = cfg.series;
    c.order_cap = get<int>(s, "series", "order_cap", c.order_cap);
    c.term_cap = get<int>(s, "series", "term_cap", c.term_cap);
    c.composition_cap = get<long>(s, "series", "composition_cap", c.composition_cap);
    c.shell_patience = get<int>(s, "series", "shell_patience", c.shell_patience);
    c.tol = get<double>(s, "series", "tol", c.tol);
    c.beta_shift = get<double>(s, "series", "beta_shift", c.beta_shift);
    const std::string reading = get<std::string>(s, "series", "theta_power", to_string(c.theta_power));
    if (reading == "alpha") c.theta_power = ThetaPowerReading::alpha;
    else if (reading == "a") c.theta_power = ThetaPowerReading::a;
    else throw config_error("series.theta_power: expected 'alpha' or 'a'");
    const std::string rule = get<std::string>(s, "series", "final_phase", to_string(c.final_phase));
    if (rule == "complete") c.final_phase = FinalPhaseRule::complete;
    else if (rule == "shifted") c.final_phase = FinalPhaseRule::shifted;
    else throw config_error("series.final_phase: expected 'complete' or 'shifted'");
  }

  if (doc.contains("times")) cfg.times = number_list(doc.at("times"), "times");
  cfg.max_phase = get<long>(doc, "config", "max_phase", cfg.max_phase);
  cfg.uniformization_limit = get<bool>(doc, "config", "uniformization_limit", cfg.uniformization_limit);

  if (doc.contains("simulation")) {
    const json& s = doc.at("simulation");
    require_object(s, "simulation",
                   {"n_paths", "step", "workers", "busy_start", "busy_cap", "inter_event_samples", "step_halving"});
    SimulationSettings& m = cfg.sim;
    m.n_paths = get<long>(s, "simulation", "n_paths", m.n_paths);
    m.step = get<double>(s, "simulation", "step", m.step);
    m.workers = get<int>(s, "simulation", "workers", m.workers);
    m.busy_start = get<int>(s, "simulation", "busy_start", m.busy_start);
    m.busy_cap = get<double>(s, "simulation", "busy_cap", m.busy_cap);
    m.inter_event_samples = get<long>(s, "simulation", "inter_event_samples", m.inter_event_samples);
    m.step_halving = get<bool>(s, "simulation", "step_halving", m.step_halving);
  }

  if (doc.contains("validation")) {
    const json& v = doc.at("validation");
    require_object(v, "validation", {"criteria", "mc_paths", "busy_paths", "inter_event_samples", "gamma_paths"});
    ValidationSettings& m = cfg.validation;
    if (v.contains("criteria")) {
      m.criteria.clear();
      for (double c : number_list(v.at("criteria"), "validation.criteria")) m.criteria.push_back(static_cast<int>(c));
    }
    m.mc_paths = get<long>(v, "validation", "mc_paths", m.mc_paths);
    m.busy_paths = get<long>(v, "validation", "busy_paths", m.busy_paths);
    m.inter_event_samples = get<long>(v, "validation", "inter_event_samples", m.inter_event_samples);
    m.gamma_paths = get<long>(v, "validation", "gamma_paths", m.gamma_paths);
  }

  cfg.output_dir = get<std::string>(doc, "config", "output_dir", cfg.output_dir);
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) throw config_error("config.seed: expected a nonnegative integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(in, nullptr, true, false);
  } catch (const json::parse_error& e) {
    throw config_error(path + ": " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& cfg) {
  json tc = {{"kind", to_string(cfg.time_change)}};
  if (cfg.time_change == TimeChange::tempered) {
    tc["theta"] = cfg.tp.theta;
    tc["alpha"] = cfg.tp.alpha;
  } else if (cfg.time_change == TimeChange::gamma) {
    tc["a"] = cfg.gp.a;
    tc["b"] = cfg.gp.b;
  }
  return {
      {"queue", {{"lambdas", cfg.qp.lambdas}, {"k", cfg.qp.k}, {"mu", cfg.qp.mu}}},
      {"time_change", tc},
      {"series",
       {{"order_cap", cfg.series.order_cap},
        {"term_cap", cfg.series.term_cap},
        {"composition_cap", cfg.series.composition_cap},
        {"shell_patience", cfg.series.shell_patience},
        {"tol", cfg.series.tol},
        {"theta_power", to_string(cfg.series.theta_power)},
        {"final_phase", to_string(cfg.series.final_phase)},
        {"beta_shift", cfg.series.beta_shift}}},
      {"times", cfg.times},
      {"max_phase", cfg.max_phase},
      {"uniformization_limit", cfg.uniformization_limit},
      {"simulation",
       {{"n_paths", cfg.sim.n_paths},
        {"step", cfg.sim.step},
        {"workers", cfg.sim.workers},
        {"busy_start", cfg.sim.busy_start},
        {"busy_cap", cfg.sim.busy_cap},
        {"inter_event_samples", cfg.sim.inter_event_samples},
        {"step_halving", cfg.sim.step_halving}}},
      {"validation",
       {{"criteria", cfg.validation.criteria},
        {"mc_paths", cfg.validation.mc_paths},
        {"busy_paths", cfg.validation.busy_paths},
        {"inter_event_samples", cfg.validation.inter_event_samples},
        {"gamma_paths", cfg.validation.gamma_paths}}},
      {"output_dir", cfg.output_dir},
      {"seed", cfg.seed},
  };
}

}  // namespace erlq
