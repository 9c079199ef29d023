#include "rnf/io.hpp"
#include "rnf/polynomial.hpp"
#include "rnf/runner.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

using namespace rnf;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  REQUIRE(is.good());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct TmpDir {
  fs::path path;
  TmpDir(const std::string& tag) : path(fs::temp_directory_path() / ("rnf_test_" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TmpDir() { fs::remove_all(path); }
};
}  // namespace

TEST_CASE("multi-index serialization round-trips in display order", "[io]") {
  auto j = make_tuple({{-1, 3}, {1, 5}, {-1, -1}, {1, 0}, {1, 1}, {-1, 4}});
  Json enc = to_json(j);
  REQUIRE(enc.dump() == "[[1,0],[1,1],[1,5],[-1,-1],[-1,3],[-1,4]]");
  REQUIRE(multi_index_from_json(enc) == j);
}

TEST_CASE("state serialization round-trips", "[io]") {
  Rng rng(3);
  auto z = random_state(4, rng, 0.7);
  auto w = state_from_json(to_json(z));
  REQUIRE(w.window() == z.window());
  for (int a = -4; a <= 4; ++a) {
    REQUIRE(w.xi(a) == z.xi(a));
    REQUIRE(w.eta(a) == z.eta(a));
  }
}

TEST_CASE("rational term serialization carries the divisor split", "[io]") {
  auto pi = make_tuple({{1, 2}, {1, -1}, {1, -1}, {-1, -2}, {-1, 1}, {-1, 1}});
  RationalTerm t;
  t.c = {0.25, -0.5};
  t.pi = pi;
  t.k_omega.push_back(pi);
  t.h_Omega.push_back(pi);
  Json enc = to_json(t);
  REQUIRE(enc["n"] == 1);
  REQUIRE(enc["k_omega"].size() == 1);
  REQUIRE(enc["k_Omega"].size() == 0);
  REQUIRE(enc["h_Omega"].size() == 1);
  REQUIRE(enc["coeff"][0] == 0.25);
}

TEST_CASE("polynomial serialization lists indices, rationals and generators", "[io]") {
  auto X = chi4(3);
  Json enc = to_json(X);
  REQUIRE(enc["half_degree"] == 2);
  REQUIRE(enc["terms"].size() == X.size());
  // every coefficient names its generator exponents and exact rational parts
  auto& first = enc["terms"][0];
  REQUIRE(first.contains("index"));
  REQUIRE(first["coeff"][0]["gen"].size() == 3);
  REQUIRE(first["coeff"][0]["gen"][1] == 1);  // linear in phi'(0)
}

TEST_CASE("config validation rejects bad inputs", "[cli]") {
  ExperimentConfig cfg;
  cfg.experiment = "nonsense";
  REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.experiment = "survey";
  cfg.eps = 2.0;
  REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.eps = 0.1;
  cfg.phi1 = 0.0;
  REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.phi1 = 1.0;
  REQUIRE_NOTHROW(cfg.validate());

  // parameter defaults follow the eps-power rules
  REQUIRE(cfg.gamma_eff() == Catch::Approx(std::pow(0.1, 1.0 / 3.0 + 1.0 / 12.0)));
  REQUIRE(cfg.N_eff() == Catch::Approx(std::pow(0.1, -(2.0 * cfg.r - 2.0) / cfg.s)));
  REQUIRE(cfg.T_eff() == Catch::Approx(1000.0));
}

TEST_CASE("survey with zero trials writes an empty record file and succeeds", "[cli]") {
  TmpDir tmp("empty_survey");
  ExperimentConfig cfg;
  cfg.experiment = "survey";
  cfg.trials = 0;
  cfg.K = 6;
  cfg.K_check = 6;
  cfg.output_dir = (tmp.path / "run").string();
  auto oc = run_experiment(cfg);
  REQUIRE(oc.exit_code == 0);
  REQUIRE(fs::exists(tmp.path / "run/records.jsonl"));
  REQUIRE(slurp(tmp.path / "run/records.jsonl").empty());
  // plot data still carries its header
  auto plot = slurp(tmp.path / "run/gamma_failure.tsv");
  REQUIRE(plot.find("gamma\tfailure_rate") == 0);
}

TEST_CASE("survey outputs are byte-identical for identical config and seed", "[cli]") {
  TmpDir tmp("determinism");
  ExperimentConfig cfg;
  cfg.experiment = "survey";
  cfg.trials = 60;
  cfg.K = 8;
  cfg.K_check = 8;
  cfg.seed = 77;
  cfg.output_dir = (tmp.path / "a").string();
  run_experiment(cfg);
  cfg.output_dir = (tmp.path / "b").string();
  run_experiment(cfg);
  REQUIRE(slurp(tmp.path / "a/records.jsonl") == slurp(tmp.path / "b/records.jsonl"));
  REQUIRE(slurp(tmp.path / "a/gamma_failure.tsv") == slurp(tmp.path / "b/gamma_failure.tsv"));
  REQUIRE(slurp(tmp.path / "a/config.json") == slurp(tmp.path / "b/config.json"));

  auto differs = slurp(tmp.path / "a/records.jsonl");
  cfg.seed = 78;
  cfg.output_dir = (tmp.path / "c").string();
  run_experiment(cfg);
  REQUIRE(slurp(tmp.path / "c/records.jsonl") != differs);
}

TEST_CASE("plane-wave smoke simulation has constant I_1", "[cli]") {
  TmpDir tmp("plane");
  ExperimentConfig cfg;
  cfg.experiment = "simulate";
  cfg.initial = "plane";
  cfg.K = 8;
  cfg.T = 5.0;
  cfg.output_dir = (tmp.path / "run").string();
  auto oc = run_experiment(cfg);
  REQUIRE(oc.exit_code == 0);
  REQUIRE(oc.report["max_action_drift"].get<double>() < 1e-13);
  auto csv = slurp(tmp.path / "run/trajectory.csv");
  REQUIRE(csv.find("t,mass,energy,action_drift,norm_s,torus_dist") == 0);
  // the final state checkpoints in the per-mode record format
  auto z = state_from_json(Json::parse(slurp(tmp.path / "run/final_state.json")));
  REQUIRE(z.window() == 8);
  REQUIRE(std::abs(std::abs(z.xi(1)) - 0.1) < 1e-12);
}

TEST_CASE("birkhoff-oracle run reports exact tables", "[cli]") {
  TmpDir tmp("oracle");
  ExperimentConfig cfg;
  cfg.experiment = "birkhoff-oracle";
  cfg.K = 4;
  cfg.output_dir = (tmp.path / "run").string();
  auto oc = run_experiment(cfg);
  REQUIRE(oc.exit_code == 0);
  REQUIRE(oc.report["tables_exact"].get<bool>());
  REQUIRE(fs::exists(tmp.path / "run/beta_table.tsv"));
}

TEST_CASE("pipeline run emits a stage report and residual table", "[cli]") {
  TmpDir tmp("pipe");
  ExperimentConfig cfg;
  cfg.experiment = "pipeline";
  cfg.K = 5;
  cfg.N = 12;
  cfg.phi2 = 1.0;
  cfg.output_dir = (tmp.path / "run").string();
  auto oc = run_experiment(cfg);
  REQUIRE(oc.exit_code == 0);
  REQUIRE(fs::exists(tmp.path / "run/pipeline_report.json"));
  auto table = slurp(tmp.path / "run/residual.tsv");
  REQUIRE(table.find("eps\tresidual_vector_field_norm") == 0);
}

TEST_CASE("emit-plotdata reproduces failure rates from records", "[cli]") {
  TmpDir tmp("emit");
  ExperimentConfig cfg;
  cfg.experiment = "survey";
  cfg.trials = 40;
  cfg.K = 8;
  cfg.K_check = 8;
  cfg.output_dir = (tmp.path / "run").string();
  run_experiment(cfg);
  auto lines =
      emit_plotdata_from_records((tmp.path / "run/records.jsonl").string(), {0.3, 0.1});
  REQUIRE(lines.size() == 3);
  REQUIRE(lines[0] == "gamma\tfailure_rate");

  // empty input: header only
  std::ofstream((tmp.path / "empty.jsonl").string()).close();
  auto empty = emit_plotdata_from_records((tmp.path / "empty.jsonl").string(), {0.3});
  REQUIRE(empty.size() == 2);
  REQUIRE(empty[1].find("0.29999") != std::string::npos);
}
