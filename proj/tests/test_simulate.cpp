#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "evtortho/simulate.hpp"

using namespace evt;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct TempPath {
  std::string path;
  explicit TempPath(std::string p) : path(std::move(p)) {}
  ~TempPath() { std::remove(path.c_str()); }
};

SimulationConfig small_config() {
  SimulationConfig cfg;
  cfg.true_params = ClassicalParams::gev2(1.0, 0.2);
  cfg.d = 12;
  cfg.n = 40;
  cfg.seed = 99;
  cfg.charts = {Chart::gev2_scale};
  return cfg;
}

}  // namespace

TEST_CASE("pearson correlation matches hand-checked examples") {
  CHECK(across_replication_correlation({{0, 0}, {1, 1}, {2, 2}}) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(across_replication_correlation({{0, 1}, {1, 0}}) ==
        doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(across_replication_correlation({{0, 0}, {1, 0}, {0, 1}, {1, 1}}) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(across_replication_correlation({{1, 2}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(across_replication_correlation({{1, 1}, {1, 2}}),
                  std::invalid_argument);
}

TEST_CASE("campaign configuration validates its ranges") {
  SimulationConfig cfg = small_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.d = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.n = 4;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.charts = {Chart::gp_scale};  // chart family != campaign family
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("campaign output has the documented record layout") {
  const SimulationConfig cfg = small_config();
  const SimulationOutput out = run_campaign(cfg);
  REQUIRE(out.per_replication.size() == cfg.d * 2);
  for (std::size_t r = 0; r < cfg.d; ++r) {
    const auto& classical = out.per_replication[2 * r];
    const auto& chart = out.per_replication[2 * r + 1];
    CHECK(classical.replication_id == r);
    CHECK(chart.replication_id == r);
    CHECK(classical.parametrisation == "classical");
    CHECK(chart.parametrisation == "gev2-scale");
    CHECK(classical.param_names ==
          std::vector<std::string>{"sigma", "xi"});
    CHECK(chart.param_names == std::vector<std::string>{"rho", "xi"});
    REQUIRE(classical.estimates.size() == 2);
    REQUIRE(chart.estimates.size() == 2);
  }
  CHECK(out.summaries.count("classical") == 1);
  CHECK(out.summaries.count("gev2-scale") == 1);
  const auto& s = out.summaries.at("classical");
  CHECK(s.n_converged <= cfg.d);
  CHECK(s.convergence_rate ==
        doctest::Approx(static_cast<double>(s.n_converged) /
                        static_cast<double>(cfg.d)));
}

TEST_CASE("campaigns are reproducible run to run") {
  const SimulationConfig cfg = small_config();
  const SimulationOutput a = run_campaign(cfg);
  const SimulationOutput b = run_campaign(cfg);
  REQUIRE(a.per_replication.size() == b.per_replication.size());
  for (std::size_t i = 0; i < a.per_replication.size(); ++i) {
    CHECK(a.per_replication[i].estimates == b.per_replication[i].estimates);
    CHECK(a.per_replication[i].cross_correlation ==
          b.per_replication[i].cross_correlation);
  }
}

TEST_CASE("campaign output does not depend on the worker count") {
  SimulationConfig one = small_config();
  one.workers = 1;
  SimulationConfig four = small_config();
  four.workers = 4;
  const SimulationOutput a = run_campaign(one);
  const SimulationOutput b = run_campaign(four);
  REQUIRE(a.per_replication.size() == b.per_replication.size());
  for (std::size_t i = 0; i < a.per_replication.size(); ++i) {
    CHECK(a.per_replication[i].estimates == b.per_replication[i].estimates);
  }
}

TEST_CASE("written artifacts are byte-identical across runs") {
  const SimulationConfig cfg = small_config();
  const SimulationOutput out_a = run_campaign(cfg);
  const SimulationOutput out_b = run_campaign(cfg);
  TempPath csv_a("test_sim_a.csv"), csv_b("test_sim_b.csv");
  TempPath json_a("test_sim_a.json"), json_b("test_sim_b.json");
  write_replications_csv(out_a, csv_a.path);
  write_replications_csv(out_b, csv_b.path);
  write_summary_json(out_a, json_a.path);
  write_summary_json(out_b, json_b.path);
  CHECK(slurp(csv_a.path) == slurp(csv_b.path));
  CHECK(slurp(json_a.path) == slurp(json_b.path));
}

TEST_CASE("csv artifact carries the documented header and row shape") {
  const SimulationConfig cfg = small_config();
  const SimulationOutput out = run_campaign(cfg);
  TempPath csv("test_sim_layout.csv");
  write_replications_csv(out, csv.path);
  std::ifstream f(csv.path);
  std::string header;
  REQUIRE(std::getline(f, header));
  CHECK(header ==
        "replication_id,family,parametrisation,param1_name,param1_hat,"
        "param2_name,param2_hat,cross_correlation,converged");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    ++rows;
    std::size_t commas = 0;
    for (char ch : line) commas += ch == ',' ? 1 : 0;
    CHECK(commas == 8);
  }
  CHECK(rows == cfg.d * 2);
}

TEST_CASE("summary json echoes the config and is versioned") {
  const SimulationConfig cfg = small_config();
  const SimulationOutput out = run_campaign(cfg);
  TempPath path("test_sim_summary.json");
  write_summary_json(out, path.path);
  const std::string text = slurp(path.path);
  CHECK(text.find("\"schema_version\"") != std::string::npos);
  CHECK(text.find("\"gev2\"") != std::string::npos);
  CHECK(text.find("\"gev2-scale\"") != std::string::npos);
  CHECK(text.find("\"across_replication_correlation\"") != std::string::npos);
  CHECK(text.find("\"median_abs_cross_correlation\"") != std::string::npos);
  // The worker count must not leak into the artifact (outputs are
  // worker-independent by contract).
  CHECK(text.find("\"workers\"") == std::string::npos);
}

TEST_CASE("classical estimates correlate strongly while chart estimates do not") {
  SimulationConfig cfg = small_config();
  cfg.d = 40;
  const SimulationOutput out = run_campaign(cfg);
  const auto& classical = out.summaries.at("classical");
  const auto& chart = out.summaries.at("gev2-scale");
  CHECK(classical.across_replication_correlation > 0.8);
  CHECK(std::abs(chart.across_replication_correlation) < 0.4);
  CHECK(classical.median_abs_cross_correlation > 0.8);
  CHECK(chart.median_abs_cross_correlation < 0.2);
  CHECK(out.paired_mismatch_count <= 2);
}
