#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "erlq/config.hpp"
#include "erlq/csv.hpp"

using namespace erlq;
using nlohmann::json;

TEST_CASE("minimal configuration takes defaults") {
  auto cfg = parse_config(json::parse(R"({"queue": {"lambdas": [0.6, 0.3], "k": 2, "mu": 1.2}})"));
  CHECK(cfg.qp.l() == 2);
  CHECK(cfg.time_change == TimeChange::tempered);
  CHECK(cfg.series.theta_power == ThetaPowerReading::a);
  CHECK(cfg.series_context().tp.alpha == doctest::Approx(0.7));
}

TEST_CASE("configuration round trip") {
  auto doc = json::parse(R"({
    "queue": {"lambdas": [0.8], "k": 3, "mu": 2.0},
    "time_change": {"kind": "gamma", "a": 2.0, "b": 3.0},
    "series": {"tol": 1e-8, "final_phase": "shifted"},
    "times": [0.25, 1.5],
    "simulation": {"n_paths": 123, "workers": 2},
    "seed": 42
  })");
  auto cfg = parse_config(doc);
  CHECK(cfg.gp.b == 3.0);
  CHECK(cfg.series.final_phase == FinalPhaseRule::shifted);
  CHECK(cfg.sim_plan().horizon == 1.5);
  auto again = parse_config(to_json(cfg));
  CHECK(to_json(again) == to_json(cfg));
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(parse_config(json::parse(R"({})")), config_error);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"queue": {"lambdas": [1], "k": 1, "mu": 1}, "extra": 1})")),
                  config_error);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"queue": {"lambdas": [1], "k": 1.5, "mu": 1}})")), config_error);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"queue": {"lambdas": [1], "k": 1, "mu": -1}})")), config_error);
  CHECK_THROWS_AS(
      parse_config(json::parse(R"({"queue": {"lambdas": [1], "k": 1, "mu": 1}, "series": {"theta_power": "b"}})")),
      config_error);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"queue": {"lambdas": [1], "k": 1, "mu": 1}, "seed": -3})")),
                  config_error);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), config_error);
}

TEST_CASE("csv cells keep full precision") {
  const auto path = std::filesystem::temp_directory_path() / "erlq_csv_test.csv";
  {
    CsvWriter out(path.string(), {"x", "label"});
    out << 0.1 << "a";
    out << 1.0 / 3.0 << "b";
  }
  std::ifstream in(path);
  std::string header, row1, row2;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  CHECK(header == "x,label");
  CHECK(std::stod(row1.substr(0, row1.find(','))) == 0.1);
  CHECK(std::stod(row2.substr(0, row2.find(','))) == 1.0 / 3.0);
  std::filesystem::remove(path);
  CHECK(CsvWriter::format(INFINITY) == "inf");
}
