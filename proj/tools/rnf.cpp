// rnf — rational-normal-form laboratory for the cubic Schrödinger models on
// the torus: seeded experiments over the non-resonant sets, split-step
// simulation with drift diagnostics, the exact sextic normal-form oracle,
// the bracket closure audit and the normal-form pipeline.

#include "rnf/runner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace rnf;

namespace {

void add_common(CLI::App* sub, ExperimentConfig& cfg, std::string& config_path) {
  sub->add_option("--config", config_path, "JSON config file; flags override its keys");
  sub->add_option("--model", cfg.model, "nls | nlsp");
  sub->add_option("--eps", cfg.eps, "amplitude parameter");
  sub->add_option("--gamma", cfg.gamma, "non-resonance level (default eps^(1/3+1/12))");
  sub->add_option("--r", cfg.r, "order parameter");
  sub->add_option("--s", cfg.s, "regularity weight");
  sub->add_option("--N", cfg.N, "frequency cut-off (default eps^(-(2r-2)/s))");
  sub->add_option("--K", cfg.K, "mode window");
  sub->add_option("--K-check", cfg.K_check, "membership check window (default K)");
  sub->add_option("--length-cap", cfg.length_cap, "index length cap of the membership checks");
  sub->add_option("--dt", cfg.dt, "time step");
  sub->add_option("--T", cfg.T, "horizon (default eps^-3)");
  sub->add_option("--trials", cfg.trials, "number of seeded trials");
  sub->add_option("--seed", cfg.seed, "master seed");
  sub->add_option("--phi0", cfg.phi0, "phi(0), the mass");
  sub->add_option("--phi1", cfg.phi1, "phi'(0)");
  sub->add_option("--phi2", cfg.phi2, "phi''(0)");
  sub->add_option("--out", cfg.output_dir, "output directory");
}

void load_config_file(const std::string& path, ExperimentConfig& cfg) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read config file " + path);
  Json j = Json::parse(is);
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j[key].template get<std::decay_t<decltype(field)>>();
  };
  get("experiment", cfg.experiment);
  get("model", cfg.model);
  get("eps", cfg.eps);
  get("gamma", cfg.gamma);
  get("r", cfg.r);
  get("s", cfg.s);
  get("N", cfg.N);
  get("K", cfg.K);
  get("K_check", cfg.K_check);
  get("length_cap", cfg.length_cap);
  get("dt", cfg.dt);
  get("T", cfg.T);
  get("trials", cfg.trials);
  get("seed", cfg.seed);
  get("phi0", cfg.phi0);
  get("phi1", cfg.phi1);
  get("phi2", cfg.phi2);
  get("initial", cfg.initial);
  get("n_max", cfg.n_max);
  get("xn_mode", cfg.xn_mode);
  get("output_dir", cfg.output_dir);
  if (j.contains("gammas")) cfg.gammas = j["gammas"].get<std::vector<double>>();
}

int dispatch(ExperimentConfig cfg, const std::string& config_path) {
  if (!config_path.empty()) load_config_file(config_path, cfg);
  if (const char* root = std::getenv("RNF_OUTPUT_ROOT"); root && cfg.output_dir == "out")
    cfg.output_dir = std::string(root) + "/" + cfg.experiment;
  try {
    auto oc = run_experiment(cfg);
    std::cout << oc.summary << "\n";
    if (!oc.report.empty()) std::cout << oc.report.dump(2) << "\n";
    std::cout << "outputs in " << cfg.output_dir << "\n";
    return oc.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rational normal form laboratory for NLS/NLSP on the torus"};
  app.require_subcommand(1);

  struct SubSpec {
    const char* name;
    const char* help;
  };
  const SubSpec subs[] = {
      {"simulate", "split-step integration; --initial plane for the smoke run, law ensembles otherwise"},
      {"survey", "Monte Carlo membership survey over a gamma grid"},
      {"sequence", "nested eps-sequence membership experiment"},
      {"birkhoff-oracle", "exact extraction of the sextic integrable coefficients"},
      {"bracket-audit", "randomized Poisson-bracket closure audit"},
      {"pipeline", "normal-form pipeline with stage report and residual scaling"},
  };

  std::vector<ExperimentConfig> cfgs(std::size(subs));
  std::vector<std::string> config_paths(std::size(subs));
  std::vector<CLI::App*> apps;
  for (std::size_t i = 0; i < std::size(subs); ++i) {
    auto* sub = app.add_subcommand(subs[i].name, subs[i].help);
    cfgs[i].experiment = subs[i].name;
    add_common(sub, cfgs[i], config_paths[i]);
    if (std::string(subs[i].name) == "simulate")
      sub->add_option("--initial", cfgs[i].initial, "law | plane");
    if (std::string(subs[i].name) == "survey")
      sub->add_option("--gammas", cfgs[i].gammas, "gamma grid for the survey");
    if (std::string(subs[i].name) == "sequence") {
      sub->add_option("--n-max", cfgs[i].n_max, "sequence depth");
      sub->add_option("--xn-mode", cfgs[i].xn_mode, "iid | constant");
    }
    apps.push_back(sub);
  }

  std::string records_path, plot_out = "plotdata.tsv";
  auto* emit = app.add_subcommand("emit-plotdata", "tabulate failure rates from survey records");
  emit->add_option("records", records_path, "records.jsonl from a survey run")->required();
  emit->add_option("--out", plot_out, "output table path");
  std::vector<double> emit_gammas = {0.3, 0.1, 0.03, 0.01};
  emit->add_option("--gammas", emit_gammas, "gamma grid");

  CLI11_PARSE(app, argc, argv);

  if (emit->parsed()) {
    try {
      write_lines(plot_out, emit_plotdata_from_records(records_path, emit_gammas));
      std::cout << "wrote " << plot_out << "\n";
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  for (std::size_t i = 0; i < apps.size(); ++i)
    if (apps[i]->parsed()) return dispatch(cfgs[i], config_paths[i]);
  return 1;
}
