// runner.hpp — batch orchestration: validated configurations, seeded runs of
// the experiment families, deterministic persistence, and plot-data emission.
//
// Result files are byte-identical for identical (config, seed, version);
// wall time and other non-reproducible metadata go to the run_meta.json
// sidecar, which is excluded from that contract.

#pragma once

#include "rnf/audit.hpp"
#include "rnf/experiments.hpp"
#include "rnf/io.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace rnf {

inline const char* artifact_version() { return "0.1.0"; }

struct ExperimentConfig {
  std::string experiment = "survey";  // simulate | survey | sequence |
                                      // birkhoff-oracle | bracket-audit | pipeline
  std::string model = "nls";          // nls | nlsp
  double eps = 0.1;
  double gamma = -1;   // negative: eps^{1/3 + 1/12}
  int r = 2;
  double s = 4.0;
  double N = -1;       // negative: eps^{-(2r-2)/s}
  int K = 16;          // state / law window
  int K_check = -1;    // negative: same as K
  int length_cap = 6;  // quantifier length cap used by the membership checks
  double dt = 1e-2;
  double T = -1;       // negative: eps^{-3}
  std::int64_t trials = 100;
  std::uint64_t seed = 1;
  double phi0 = 0.0, phi1 = 1.0, phi2 = 0.0;
  std::string initial = "law";  // law | plane (simulate only)
  std::vector<double> gammas = {0.3, 0.1, 0.03, 0.01};
  int n_max = 6;              // sequence experiment
  std::string xn_mode = "iid";
  std::string output_dir = "out";

  void validate() const {
    const std::vector<std::string> kinds = {"simulate", "survey", "sequence", "birkhoff-oracle",
                                            "bracket-audit", "pipeline"};
    if (std::find(kinds.begin(), kinds.end(), experiment) == kinds.end())
      throw std::invalid_argument("unknown experiment '" + experiment + "'");
    if (model != "nls" && model != "nlsp") throw std::invalid_argument("model must be nls or nlsp");
    if (eps <= 0 || eps >= 1) throw std::invalid_argument("eps must lie in (0,1)");
    if (r < 1) throw std::invalid_argument("r must be >= 1");
    if (s < 0) throw std::invalid_argument("s must be >= 0");
    if (K < 1 || K > 512) throw std::invalid_argument("window K out of range");
    if (dt <= 0) throw std::invalid_argument("dt must be positive");
    if (trials < 0) throw std::invalid_argument("trials must be >= 0");
    if (phi1 == 0) throw std::invalid_argument("phi1 (phi'(0)) must be nonzero");
    if (xn_mode != "iid" && xn_mode != "constant")
      throw std::invalid_argument("xn_mode must be iid or constant");
  }

  double gamma_eff() const { return gamma > 0 ? gamma : std::pow(eps, 1.0 / 3.0 + 1.0 / 12.0); }
  double N_eff() const { return N > 0 ? N : std::pow(eps, -(2.0 * r - 2.0) / s); }
  double T_eff() const { return T > 0 ? T : std::pow(eps, -3.0); }
  int K_check_eff() const { return K_check > 0 ? K_check : K; }
  Model model_id() const { return model == "nls" ? Model::NLS : Model::NLSP; }

  ModelParams model_params() const { return {phi0, phi1, phi2, model_id(), -1}; }
  NonResonanceParams nonres_params() const {
    NonResonanceParams q;
    q.gamma = gamma_eff();
    q.eps = eps;
    q.r = r;
    q.s = s;
    q.N = N_eff();
    q.K_check = K_check_eff();
    q.model = model_id();
    q.length_cap_full = length_cap;
    q.length_cap_trunc = length_cap;
    return q;
  }
  SamplingLaw law() const { return {model_id(), s, K, seed}; }

  Json to_json() const {
    Json j;
    j["experiment"] = experiment;
    j["model"] = model;
    j["eps"] = eps;
    j["gamma"] = gamma_eff();
    j["r"] = r;
    j["s"] = s;
    j["N"] = N_eff();
    j["K"] = K;
    j["K_check"] = K_check_eff();
    j["length_cap"] = length_cap;
    j["dt"] = dt;
    j["T"] = T_eff();
    j["trials"] = trials;
    j["seed"] = seed;
    j["phi0"] = phi0;
    j["phi1"] = phi1;
    j["phi2"] = phi2;
    j["initial"] = initial;
    j["gammas"] = gammas;
    j["n_max"] = n_max;
    j["xn_mode"] = xn_mode;
    return j;
  }

  std::uint64_t config_hash() const {
    std::string dump = to_json().dump();
    std::uint64_t h = 1469598103934665603ull;
    for (char c : dump) h = (h ^ std::uint64_t(std::uint8_t(c))) * 1099511628211ull;
    return h;
  }
};

namespace detail_run {

inline std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace detail_run

// (gamma, failure-rate) table from survey rows
inline std::vector<std::string> plot_gamma_failure(const std::vector<GammaSurveyRow>& rows) {
  std::vector<std::string> lines = {"gamma\tfailure_rate\twilson_lo\twilson_hi\tinconclusive_frac"};
  for (auto& r : rows) {
    double total = double(std::max<std::int64_t>(1, r.members + r.violations));
    lines.push_back(detail_run::fmt(r.gamma) + "\t" + detail_run::fmt(1.0 - r.ci.phat) + "\t" +
                    detail_run::fmt(1.0 - r.ci.hi) + "\t" + detail_run::fmt(1.0 - r.ci.lo) + "\t" +
                    detail_run::fmt(double(r.inconclusive) /
                                    std::max(1.0, total + double(r.inconclusive))));
  }
  return lines;
}

// (t, D_s) pairs from a trajectory
inline std::vector<std::string> plot_drift(const std::vector<DiagnosticsRow>& rows) {
  std::vector<std::string> lines = {"t\taction_drift"};
  for (auto& r : rows) lines.push_back(detail_run::fmt(r.t) + "\t" + detail_run::fmt(r.action_drift));
  return lines;
}

// (eps, residual-norm) pairs
inline std::vector<std::string> plot_residual(const std::vector<std::pair<double, double>>& pts) {
  std::vector<std::string> lines = {"eps\tresidual_vector_field_norm"};
  for (auto& [e, v] : pts) lines.push_back(detail_run::fmt(e) + "\t" + detail_run::fmt(v));
  return lines;
}

struct RunOutcome {
  int exit_code = 0;
  std::string summary;
  Json report;
};

inline RunOutcome run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  auto out = [&](const std::string& name) { return (fs::path(cfg.output_dir) / name).string(); };
  auto t_start = std::chrono::steady_clock::now();

  RunOutcome oc;
  ModelParams mp = cfg.model_params();
  NonResonanceParams q = cfg.nonres_params();

  if (cfg.experiment == "survey") {
    IrrPool pool(q.K_check, q.cap_full());
    auto rows = survey_gamma(cfg.law(), q, cfg.gammas, cfg.trials, pool, mp);
    std::vector<std::string> recs;
    auto est = estimate_probability(cfg.law(), q, cfg.trials, pool, mp);
    for (auto& r : est.records) recs.push_back(to_json(r).dump());
    write_lines(out("records.jsonl"), recs);
    write_lines(out("gamma_failure.tsv"), plot_gamma_failure(rows));
    Json rep;
    rep["rows"] = Json::array();
    for (auto& r : rows)
      rep["rows"].push_back(Json{{"gamma", r.gamma},
                                 {"members", r.members},
                                 {"violations", r.violations},
                                 {"inconclusive", r.inconclusive},
                                 {"phat", r.ci.phat}});
    oc.report = rep;
    oc.summary = "survey: " + std::to_string(cfg.trials) + " trials over " +
                 std::to_string(cfg.gammas.size()) + " gamma levels";
  } else if (cfg.experiment == "simulate") {
    IntegratorConfig icfg;
    icfg.dt = cfg.dt;
    icfg.T = cfg.T_eff();
    icfg.diag_s = cfg.s;
    icfg.sample_every = std::max<std::int64_t>(1, std::llround(icfg.T / cfg.dt / 400));
    if (cfg.initial == "plane") {
      FourierState z(cfg.K);
      z.set_mode(1, {cfg.eps, 0.0});
      auto traj = integrate(z, mp, icfg);
      std::ofstream os(out("trajectory.csv"));
      write_trajectory_csv(os, traj.samples);
      std::ofstream cs(out("final_state.json"));
      cs << to_json(traj.final_state).dump(2) << '\n';
      oc.summary = "simulate: plane wave, final drift " + detail_run::fmt(traj.max_action_drift);
      oc.report = Json{{"max_action_drift", traj.max_action_drift},
                       {"max_mass_drift", traj.max_mass_drift},
                       {"max_energy_drift", traj.max_energy_drift}};
    } else {
      IrrPool pool(q.K_check, q.cap_trunc());
      auto sum = action_drift_experiment(cfg.law(), mp, q, icfg, cfg.trials, pool);
      std::vector<std::string> recs;
      for (auto& r : sum.records) {
        Json j;
        j["trial"] = r.trial;
        j["screen"] = r.screen_verdict;
        j["margin"] = r.screen_margin;
        j["max_action_drift"] = r.max_action_drift;
        j["within_envelope"] = r.within_envelope;
        recs.push_back(j.dump());
      }
      write_lines(out("records.jsonl"), recs);
      write_lines(out("drift.tsv"), plot_drift(sum.sample_trajectory));
      oc.report = Json{{"passes", sum.passes},
                       {"fails", sum.fails},
                       {"screened_out", sum.screened_out},
                       {"envelope", sum.envelope},
                       {"horizon", sum.horizon}};
      oc.summary = "simulate: " + std::to_string(sum.passes) + "/" +
                   std::to_string(sum.passes + sum.fails) + " under the drift envelope";
    }
  } else if (cfg.experiment == "sequence") {
    IrrPool pool(q.K_check, q.cap_full());
    auto res = epsilon_sequence_experiment(cfg.eps, cfg.law(), q, cfg.n_max,
                                           cfg.xn_mode == "iid" ? XnMode::iid : XnMode::constant,
                                           cfg.trials, std::max<std::int64_t>(1, cfg.trials / 2),
                                           pool, mp);
    Json rep;
    rep["outer"] = res.outer;
    rep["inner"] = res.inner;
    rep["nu"] = res.nu;
    rep["outer_good"] = res.outer_good;
    rep["inner_frequency_mean"] = res.inner_frequency_mean;
    Json table = Json::array();
    for (auto& row : res.ok_counts) table.push_back(row);
    rep["ok_counts"] = table;
    std::ofstream os(out("sequence.json"));
    os << rep.dump(2) << '\n';
    oc.report = rep;
    oc.summary = "sequence: outer_good " + std::to_string(res.outer_good) + "/" +
                 std::to_string(res.outer);
  } else if (cfg.experiment == "birkhoff-oracle") {
    auto ex = extract_z6_oracle(cfg.K);
    bool ok = ex.irreducible_part.empty();
    std::vector<std::string> lines = {"a\tb\tbeta\texpected"};
    for (auto& [ab, c] : ex.beta) {
      auto expt = beta_expected(ab.first, ab.second);
      ok = ok && c == expt;
      lines.push_back(std::to_string(ab.first) + "\t" + std::to_string(ab.second) + "\t" +
                      detail_run::fmt(c.eval(mp.phi0, mp.phi1, mp.phi2).real()) + "\t" +
                      detail_run::fmt(expt.eval(mp.phi0, mp.phi1, mp.phi2).real()));
    }
    for (auto& [a, c] : ex.alpha) ok = ok && c.is_zero();
    for (auto& [t, c] : ex.gamma) ok = ok && c.is_zero();
    write_lines(out("beta_table.tsv"), lines);
    oc.report = Json{{"window", cfg.K},
                     {"beta_entries", ex.beta.size()},
                     {"tables_exact", ok},
                     {"irreducible_part_vanishes", ex.irreducible_part.empty()}};
    oc.summary = std::string("birkhoff-oracle: tables ") + (ok ? "exact" : "MISMATCH");
    oc.exit_code = ok ? 0 : 1;
  } else if (cfg.experiment == "bracket-audit") {
    auto sum = bracket_closure_audit(cfg.trials, cfg.seed, mp, std::min(cfg.K, 6));
    std::vector<std::string> recs;
    for (auto& at : sum.trials) {
      Json j;
      j["trial"] = at.trial;
      j["mode"] = at.mode;
      j["orders"] = Json::array({at.r_a, at.r_b});
      j["nonempty"] = at.nonempty;
      j["subclass_ok"] = at.subclass_ok;
      j["order_ok"] = at.order_ok;
      j["weight_ok"] = at.weight_ok;
      j["certificate_ok"] = at.certificate_ok;
      j["oracle_ok"] = at.oracle_ok;
      j["max_rel_err"] = at.max_rel_err;
      recs.push_back(j.dump());
    }
    write_lines(out("audit.jsonl"), recs);
    oc.report = Json{{"audited", sum.total}, {"passed", sum.passed}, {"empty", sum.empty_outputs}};
    oc.summary = "bracket-audit: " + std::to_string(sum.passed) + "/" + std::to_string(sum.total) +
                 " closure checks passed";
    oc.exit_code = sum.passed == sum.total ? 0 : 1;
  } else if (cfg.experiment == "pipeline") {
    PipelineOptions popt;
    popt.r = cfg.r;
    popt.N = cfg.N_eff();
    auto res = normal_form_pipeline(std::min(cfg.K, 8), mp, popt);
    Json rep;
    rep["window"] = res.window;
    rep["truncation_certificate_ok"] = res.truncation_certificate_ok;
    rep["k6_kept"] = res.k6_kept.size();
    rep["k6_tail"] = res.k6_tail.size();
    rep["dropped_terms"] = res.dropped_terms;
    rep["stages"] = Json::array();
    for (auto& st : res.stages) rep["stages"].push_back(to_json(st));
    // residual scaling table
    SamplingLaw law{mp.model, cfg.s, res.window, cfg.seed};
    auto I = sample_actions(law, 0);
    Rng prng(cfg.seed ^ 0x9e97u, 0);
    auto z0 = build_initial_state(I, 1.0, random_phases(res.window, prng), cfg.s, false);
    std::vector<std::pair<double, double>> pts;
    for (double e : {0.1, 0.0562, 0.0316, 0.0178, 0.01, 0.0056})
      pts.push_back({e, vector_field_norm(res.residual, z0.scaled(e), mp, cfg.s)});
    write_lines(out("residual.tsv"), plot_residual(pts));
    std::ofstream os(out("pipeline_report.json"));
    os << rep.dump(2) << '\n';
    oc.report = rep;
    oc.summary = "pipeline: " + std::to_string(res.stages.size()) + " stages, residual terms " +
                 std::to_string(res.residual.size());
  }

  // deterministic record of the configuration
  {
    std::ofstream os(out("config.json"));
    Json j = cfg.to_json();
    j["config_hash"] = cfg.config_hash();
    j["version"] = artifact_version();
    os << j.dump(2) << '\n';
  }
  // non-deterministic metadata lives outside the byte-identity contract
  {
    std::ofstream os(out("run_meta.json"));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    os << Json{{"wall_seconds", secs}, {"version", artifact_version()}}.dump(2) << '\n';
  }
  return oc;
}

// plot-data emission from persisted survey records
inline std::vector<std::string> emit_plotdata_from_records(const std::string& records_path,
                                                           const std::vector<double>& gammas) {
  std::ifstream is(records_path);
  if (!is) throw std::runtime_error("missing records file: " + records_path);
  std::vector<double> margins;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto j = Json::parse(line);
    if (j.contains("margin")) margins.push_back(j["margin"].get<double>());
  }
  std::vector<std::string> lines = {"gamma\tfailure_rate"};
  for (double g : gammas) {
    std::int64_t fail = 0;
    for (double m : margins)
      if (m <= g) fail++;
    lines.push_back(detail_run::fmt(g) + "\t" +
                    detail_run::fmt(margins.empty() ? 0.0 : double(fail) / double(margins.size())));
  }
  return lines;
}

}  // namespace rnf
