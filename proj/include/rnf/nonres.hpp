// nonres.hpp — membership tests for the non-resonant sets (full and
// frequency-truncated variants, NLS and NLSP), organised around per-trial
// margin statistics: each index k contributes a ratio LHS/(RHS/gamma), and
// membership at level gamma is "gamma < min ratio".  This makes gamma- and
// eps-sweeps cheap and the gamma-nesting property structural.

#pragma once

#include "rnf/enumerate.hpp"
#include "rnf/frequencies.hpp"
#include "rnf/state.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace rnf {

struct NonResonanceParams {
  double gamma = 0.1;
  double eps = 0.1;
  int r = 2;
  double s = 4.0;
  double N = 1.0;
  int K_check = 16;
  Model model = Model::NLS;
  // the definitions cap lengths at 2r (full) and 7r (NLS truncated) / 2r
  // (NLSP truncated); both caps are exposed because the smallest irreducible
  // resonances are sextic and desk-scale r would otherwise empty the set
  int length_cap_full = -1;
  int length_cap_trunc = -1;
  // margins this close to the threshold (relatively) are not called either way
  double tie_rtol = 1e-9;

  double alpha_r() const { return model == Model::NLS ? 24.0 * r : 16.0 * r; }
  int cap_full() const { return length_cap_full > 0 ? length_cap_full : 2 * r; }
  int cap_trunc() const {
    if (length_cap_trunc > 0) return length_cap_trunc;
    return model == Model::NLS ? 7 * r : 2 * r;
  }
};

// Precompiled irreducible resonant indices with the per-index data the
// conditions need.  The tail weights w_k(b) = sum_alpha delta_alpha
// (a_alpha - b)^{-2} (b outside the entry set) drive the Omega-tilde sums;
// the NLSP weights v_k(b) skip only the singular alpha.
class IrrPool {
 public:
  struct Item {
    MultiIndex k;
    std::vector<std::pair<int, int>> net;  // (mode, net delta)
    double prod_m2, prod_m4, prod_m6;
    double mu_min, mu1;
    int len;
    std::vector<double> wtail;  // index b + K
    std::vector<double> vnlsp;  // index b + K
  };

  IrrPool(int K, int max_len, double budget = 5e8) : K_(K) {
    for (auto& k : enumerate_irreducible_resonant(max_len, K, budget)) {
      Item it;
      it.net = k.net_deltas();
      it.len = int(k.size());
      it.prod_m2 = 1.0;
      for (auto& j : k.entries()) it.prod_m2 /= double(gauge_sq(j.a));
      it.prod_m4 = it.prod_m2 * it.prod_m2;
      it.prod_m6 = it.prod_m4 * it.prod_m2;
      it.mu_min = k.mu_min();
      it.mu1 = k.mu1();
      it.wtail.assign(2 * K + 1, 0.0);
      it.vnlsp.assign(2 * K + 1, 0.0);
      for (int b = -K; b <= K; ++b) {
        bool excluded = false;
        double w = 0, v = 0;
        for (auto& j : k.entries()) {
          if (j.a == b) { excluded = true; continue; }
          double ker = 1.0 / (double(j.a - b) * (j.a - b));
          w += j.delta * ker;
          v += j.delta * ker;
        }
        it.wtail[b + K] = excluded ? 0.0 : w;
        it.vnlsp[b + K] = 2.0 * v;
      }
      it.k = std::move(k);
      items_.push_back(std::move(it));
    }
  }

  int window() const { return K_; }
  const std::vector<Item>& items() const { return items_; }

 private:
  int K_;
  std::vector<Item> items_;
};

enum class MembershipVerdict { member, violated, inconclusive };

// Membership is decided over the truncated index universe: all irreducible
// resonant indices supported in the pool window.  States supported inside
// that window make the check complete (the sampling laws put positive
// actions on every window mode, so no enumerated denominator degenerates).
// A verdict is downgraded to "inconclusive" when the margin statistic ties
// with the threshold at relative tie_rtol, or when the state's support
// exceeds the enumerated universe.
struct MembershipReport {
  MembershipVerdict verdict = MembershipVerdict::member;
  double margin_stat = std::numeric_limits<double>::infinity();  // min gamma-ratio
  double worst_lhs = 0, worst_rhs = 0;
  int worst_condition = 0;  // 1 or 2
  std::optional<MultiIndex> worst_k;
  bool coverage_ok = true;
};

namespace detail_nr {

// omega_k(I) and the quadratic tail T_k(I) = -(phi1^2/2) sum I_b^2 w_k(b)
inline void omega_and_tail(const IrrPool::Item& it, const ActionField& I, double phi1, double& w,
                           double& T) {
  w = 0;
  for (auto& [a, nd] : it.net) w += double(nd) * I[a];
  w *= -phi1;
  T = 0;
  const int K = I.window();
  for (int b = -K; b <= K; ++b) {
    double x = I[b];
    if (x != 0.0) T += x * x * it.wtail[b + K];
  }
  T *= -0.5 * phi1 * phi1;
}

inline double omega_nlsp_item(const IrrPool::Item& it, const ActionField& I, double phi1) {
  double w = 0;
  const int K = I.window();
  for (int b = -K; b <= K; ++b) {
    double x = I[b];
    if (x != 0.0) w += x * it.vnlsp[b + K];
  }
  return phi1 * w;
}

}  // namespace detail_nr

// Full-set membership (the un-truncated conditions) of the state with
// actions I at the parameters q; I must be the actions of the state under
// test (for eps z that is eps^2 times the sampled actions, or pass the raw
// actions and set scaled=false to let the routine apply the eps scaling).
inline MembershipReport in_full_set_actions(const ActionField& I, const NonResonanceParams& q,
                                            const IrrPool& pool, const ModelParams& mp,
                                            bool actions_are_scaled = true) {
  MembershipReport rep;
  const double eps2 = q.eps * q.eps;
  const double scale = actions_are_scaled ? 1.0 : eps2;
  const int cap = q.cap_full();
  for (auto& it : pool.items()) {
    if (it.len > cap) continue;
    const double mus = std::pow(it.mu_min, -2.0 * q.s);
    double lhs1, lhs2, rhs1, rhs2;
    if (q.model == Model::NLS) {
      double w, T;
      detail_nr::omega_and_tail(it, I, mp.phi1, w, T);
      w *= scale;
      T *= scale * scale;
      lhs1 = std::abs(w);
      rhs1 = q.gamma * eps2 * it.prod_m2 * mus;
      lhs2 = std::abs(w + T);  // Omega-tilde
      rhs2 = q.gamma * it.prod_m6 * std::max(eps2 * mus, eps2 * eps2);
    } else {
      double w = scale * detail_nr::omega_nlsp_item(it, I, mp.phi1);
      lhs1 = std::abs(w);
      rhs1 = q.gamma * eps2 * it.prod_m4;
      lhs2 = lhs1;
      rhs2 = rhs1;
    }
    for (int cond = 1; cond <= 2; ++cond) {
      if (q.model == Model::NLSP && cond == 2) break;
      double lhs = cond == 1 ? lhs1 : lhs2, rhs = cond == 1 ? rhs1 : rhs2;
      double ratio = lhs / (rhs / q.gamma);
      if (ratio < rep.margin_stat) {
        rep.margin_stat = ratio;
        rep.worst_lhs = lhs;
        rep.worst_rhs = rhs;
        rep.worst_condition = cond;
        rep.worst_k = it.k;
      }
    }
  }
  rep.coverage_ok = I.window() <= pool.window();
  if (!rep.coverage_ok || std::abs(rep.margin_stat - q.gamma) <= q.tie_rtol * q.gamma)
    rep.verdict = MembershipVerdict::inconclusive;
  else
    rep.verdict = rep.margin_stat > q.gamma ? MembershipVerdict::member : MembershipVerdict::violated;
  return rep;
}

inline MembershipReport in_full_set(const FourierState& z, const NonResonanceParams& q,
                                    const IrrPool& pool, const ModelParams& mp) {
  return in_full_set_actions(actions_of(z), q, pool, mp, true);
}

// Truncated-set membership: only indices with <mu_1> <= N^2, length up to the
// truncated cap, floors N^{-alpha_r}; Omega replaces Omega-tilde.
inline MembershipReport in_truncated_set_actions(const ActionField& I, const NonResonanceParams& q,
                                                 const IrrPool& pool, const ModelParams& mp) {
  MembershipReport rep;
  const double eps2 = q.eps * q.eps;
  const double Nfloor = std::pow(q.N, -q.alpha_r());
  const int cap = q.cap_trunc();
  const double mu1cap = q.N * q.N;

  // per-mode cache of dZ6/dI over the window
  auto fp = FreqParams<double>::from(mp, I.window());
  auto gI = as_generic(I);
  std::vector<double> dz6c(2 * I.window() + 1, 0.0);
  if (q.model == Model::NLS)
    for (int c = -I.window(); c <= I.window(); ++c) dz6c[c + I.window()] = dz6(gI, fp, c);

  for (auto& it : pool.items()) {
    if (it.len > cap || it.mu1 > mu1cap) continue;
    const double mus = std::pow(it.mu_min, -2.0 * q.s);
    double lhs1, lhs2, rhs1, rhs2;
    if (q.model == Model::NLS) {
      double w = 0, dz6sum = 0;
      for (auto& [a, nd] : it.net) w += double(nd) * I[a];
      w *= -mp.phi1;
      for (auto& j : it.k.entries()) dz6sum += j.delta * dz6c[j.a + I.window()];
      lhs1 = std::abs(w);
      rhs1 = q.gamma * eps2 * Nfloor * mus;
      lhs2 = std::abs(w + dz6sum);  // Omega
      rhs2 = q.gamma * Nfloor * std::max(eps2 * mus, eps2 * eps2);
    } else {
      double w = detail_nr::omega_nlsp_item(it, I, mp.phi1);
      lhs1 = std::abs(w);
      rhs1 = q.gamma * eps2 * Nfloor;
      lhs2 = lhs1;
      rhs2 = rhs1;
    }
    for (int cond = 1; cond <= 2; ++cond) {
      if (q.model == Model::NLSP && cond == 2) break;
      double lhs = cond == 1 ? lhs1 : lhs2, rhs = cond == 1 ? rhs1 : rhs2;
      double ratio = lhs / (rhs / q.gamma);
      if (ratio < rep.margin_stat) {
        rep.margin_stat = ratio;
        rep.worst_lhs = lhs;
        rep.worst_rhs = rhs;
        rep.worst_condition = cond;
        rep.worst_k = it.k;
      }
    }
  }
  // the truncated quantifier restricts <mu_1> <= N^2; coverage is complete
  // once the pool window reaches that gauge (or the state support, whichever
  // is smaller)
  double reach = std::min(double(gauge_sq(pool.window())), double(gauge_sq(I.window())));
  rep.coverage_ok = std::sqrt(reach) >= std::min(mu1cap, std::sqrt(double(gauge_sq(I.window())))) ||
                    pool.window() >= I.window();
  if (!rep.coverage_ok || std::abs(rep.margin_stat - q.gamma) <= q.tie_rtol * q.gamma)
    rep.verdict = MembershipVerdict::inconclusive;
  else
    rep.verdict = rep.margin_stat > q.gamma ? MembershipVerdict::member : MembershipVerdict::violated;
  return rep;
}

inline MembershipReport in_truncated_set(const FourierState& z, const NonResonanceParams& q,
                                         const IrrPool& pool, const ModelParams& mp) {
  return in_truncated_set_actions(actions_of(z), q, pool, mp);
}

// ---------------------------------------------------------------------------
// stability audits

struct StabilityReport {
  bool hypothesis_holds = false;
  bool base_member = false;
  bool perturbed_member = false;
  bool implication_held = true;  // hyp && base => perturbed
  double perturbation = 0, allowance = 0;
};

// action-stability audit: if z in U^N_gamma and the weighted action
// perturbation is below c eps^2 N^{-alpha_r} (gamma' - gamma), then z' must
// lie in U^N_{gamma'}
inline StabilityReport check_action_stability(const FourierState& z, const FourierState& zp,
                                              const NonResonanceParams& q,
                                              const NonResonanceParams& qp, const IrrPool& pool,
                                              const ModelParams& mp, double c = 1.0) {
  StabilityReport rep;
  auto I = actions_of(z), Ip = actions_of(zp);
  double d = 0;
  for (int a = -I.window(); a <= I.window(); ++a)
    d = std::max(d, std::pow(double(gauge_sq(a)), q.s) * std::abs(Ip[a] - I[a]));
  rep.perturbation = d;
  rep.allowance = c * q.eps * q.eps * std::pow(q.N, -q.alpha_r()) * (qp.gamma - q.gamma);
  rep.hypothesis_holds = d <= rep.allowance;
  rep.base_member = in_truncated_set_actions(I, q, pool, mp).verdict == MembershipVerdict::member;
  rep.perturbed_member =
      in_truncated_set_actions(Ip, qp, pool, mp).verdict == MembershipVerdict::member;
  rep.implication_held = !(rep.hypothesis_holds && rep.base_member) || rep.perturbed_member;
  return rep;
}

// norm-stability audit: ||z - z'||_s <= c eps N^{-alpha_r} (gamma - gamma')
inline StabilityReport check_norm_stability(const FourierState& z, const FourierState& zp,
                                            const NonResonanceParams& q,
                                            const NonResonanceParams& qp, const IrrPool& pool,
                                            const ModelParams& mp, double c = 1.0) {
  StabilityReport rep;
  rep.perturbation = (z - zp).norm_s(q.s);
  rep.allowance = c * q.eps * std::pow(q.N, -q.alpha_r()) * (q.gamma - qp.gamma);
  rep.hypothesis_holds = rep.perturbation <= rep.allowance;
  rep.base_member = in_truncated_set(z, q, pool, mp).verdict == MembershipVerdict::member;
  rep.perturbed_member = in_truncated_set(zp, qp, pool, mp).verdict == MembershipVerdict::member;
  rep.implication_held = !(rep.hypothesis_holds && rep.base_member) || rep.perturbed_member;
  return rep;
}

// truncation inclusion audit: member of the full set + norm bound + the
// smallness condition eps^2 < c N^{-alpha_r} (gamma - gamma') implies member
// of the truncated set at gamma'
struct InclusionReport {
  bool full_member = false, trunc_member = false, condition_holds = false, implication_held = true;
};

inline InclusionReport check_truncation_inclusion(const FourierState& z,
                                                  const NonResonanceParams& q, double gamma_prime,
                                                  const IrrPool& pool, const ModelParams& mp,
                                                  double c = 1.0) {
  InclusionReport rep;
  rep.full_member = in_full_set(z, q, pool, mp).verdict == MembershipVerdict::member;
  auto qp = q;
  qp.gamma = gamma_prime;
  rep.trunc_member = in_truncated_set(z, qp, pool, mp).verdict == MembershipVerdict::member;
  rep.condition_holds = q.eps * q.eps < c * std::pow(q.N, -q.alpha_r()) * (q.gamma - gamma_prime) &&
                        z.norm_s(q.s) <= 4 * q.eps;
  rep.implication_held = !(rep.full_member && rep.condition_holds) || rep.trunc_member;
  return rep;
}

}  // namespace rnf
