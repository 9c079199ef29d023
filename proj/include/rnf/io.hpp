// io.hpp — serialization of the wire formats: multi-indices as signed pair
// lists, states as per-mode records, rational terms, JSON-lines trial
// records and tabular plot data.

#pragma once

#include "rnf/integrator.hpp"
#include "rnf/montecarlo.hpp"
#include "rnf/nonres.hpp"
#include "rnf/pipeline.hpp"
#include "rnf/rational_terms.hpp"
#include "rnf/state.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace rnf {

using Json = nlohmann::ordered_json;

inline Json to_json(const MultiIndex& m) {
  Json arr = Json::array();
  for (auto& j : m.display_order()) arr.push_back(Json::array({j.delta, j.a}));
  return arr;
}

inline MultiIndex multi_index_from_json(const Json& arr) {
  std::vector<ModeIndex> v;
  for (auto& e : arr) v.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  return MultiIndex(std::move(v));
}

// states serialize as arrays of (a, Re xi, Im xi, Re eta, Im eta)
inline Json to_json(const FourierState& z) {
  Json rec;
  rec["window"] = z.window();
  rec["reality"] = z.reality_flag();
  Json rows = Json::array();
  for (int a = -z.window(); a <= z.window(); ++a)
    rows.push_back(Json::array(
        {a, z.xi(a).real(), z.xi(a).imag(), z.eta(a).real(), z.eta(a).imag()}));
  rec["modes"] = rows;
  return rec;
}

inline FourierState state_from_json(const Json& rec) {
  FourierState z(rec.at("window").get<int>(), rec.at("reality").get<bool>());
  for (auto& row : rec.at("modes")) {
    int a = row.at(0).get<int>();
    z.xi_at(a) = {row.at(1).get<double>(), row.at(2).get<double>()};
    z.eta_at(a) = {row.at(3).get<double>(), row.at(4).get<double>()};
  }
  return z;
}

inline Json to_json(const RationalTerm& t) {
  Json rec;
  rec["coeff"] = Json::array({t.c.real(), t.c.imag()});
  rec["pi"] = to_json(t.pi);
  Json kw = Json::array(), ko = Json::array(), ho = Json::array();
  for (auto& k : t.k_omega) kw.push_back(to_json(k));
  for (auto& k : t.k_Omega) ko.push_back(to_json(k));
  for (auto& h : t.h_Omega) ho.push_back(to_json(h));
  rec["k_omega"] = kw;
  rec["k_Omega"] = ko;
  rec["h_Omega"] = ho;
  rec["n"] = t.n();
  return rec;
}

inline Json to_json(const RationalHamiltonian& H) {
  Json rec;
  rec["window"] = H.window;
  Json terms = Json::array();
  for (auto& t : H.terms) terms.push_back(to_json(t));
  rec["terms"] = terms;
  return rec;
}

// polynomials: list of (multi-index, rational coefficient, generator exponents)
inline Json to_json(const Poly& P) {
  Json terms = Json::array();
  for (auto& [j, c] : P.coeffs()) {
    Json monos = Json::array();
    for (auto& [g, v] : c.terms())
      monos.push_back(Json{{"re", v.re.str()},
                           {"im", v.im.str()},
                           {"gen", Json::array({g.e0, g.e1, g.e2})}});
    terms.push_back(Json{{"index", to_json(j)}, {"coeff", monos}});
  }
  return Json{{"half_degree", P.half_degree()}, {"terms", terms}};
}

// violation reports carry the offending index, both sides and the margin
inline Json to_json(const MembershipReport& rep) {
  Json rec;
  rec["verdict"] = rep.verdict == MembershipVerdict::member
                       ? "member"
                       : (rep.verdict == MembershipVerdict::violated ? "violated" : "inconclusive");
  rec["margin_stat"] = rep.margin_stat;
  if (rep.worst_k) {
    rec["worst_k"] = to_json(*rep.worst_k);
    rec["condition"] = rep.worst_condition;
    rec["lhs"] = rep.worst_lhs;
    rec["rhs"] = rep.worst_rhs;
  }
  return rec;
}

inline Json to_json(const TrialRecord& r) {
  Json rec;
  rec["trial"] = r.trial;
  rec["eps"] = r.eps;
  rec["verdict"] = r.verdict;
  rec["margin"] = r.margin;
  if (!r.worst_k.empty()) rec["worst_k"] = r.worst_k;
  return rec;
}

inline Json to_json(const PipelineStage& st) {
  Json rec;
  rec["name"] = st.name;
  rec["order"] = st.order;
  rec["chi_terms"] = st.chi.size();
  rec["z_terms"] = st.z_kept.size();
  rec["chi_weight"] = st.chi_weight;
  rec["certificate_ok"] = st.certificate_ok;
  if (st.chi_subclass.ok) {
    rec["chi_subclass"] = to_string(st.chi_subclass.tag);
    rec["chi_order"] = st.chi_subclass.r;
  }
  return rec;
}

// trajectory CSV: t, mass, energy, D_s, norm_s, torus_dist
inline void write_trajectory_csv(std::ostream& os, const std::vector<DiagnosticsRow>& rows) {
  os << "t,mass,energy,action_drift,norm_s,torus_dist\n";
  os << std::setprecision(17);
  for (auto& r : rows)
    os << r.t << ',' << r.mass << ',' << r.energy << ',' << r.action_drift << ',' << r.norm_s
       << ',' << r.torus_dist << '\n';
}

inline void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  for (auto& l : lines) os << l << '\n';
}

}  // namespace rnf
