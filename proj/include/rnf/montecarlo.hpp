// montecarlo.hpp — probability experiments over the sampling laws, and the
// exact partial-fraction lower-bound search.

#pragma once

#include "rnf/exact.hpp"
#include "rnf/nonres.hpp"
#include "rnf/sampling.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace rnf {

// ---------------------------------------------------------------------------
// per-draw margin statistics reusable across gamma and eps sweeps

// For a fixed action draw I the full-set conditions reduce to
//   cond 1:  |w_k| / (prod<k>^-2 mu^-2s)                > gamma      (eps-free)
//   cond 2:  |w_k + eps^2 T_k| / (prod<k>^-6 max(mu^-2s, eps^2)) > gamma
// where w_k = omega_k(I) and T_k is the quadratic tail; NLSP has only the
// eps-free linear condition with prod<k>^-4.
class FullSetMargins {
 public:
  FullSetMargins(const ActionField& I, const NonResonanceParams& q, const IrrPool& pool,
                 const ModelParams& mp) {
    const int cap = q.cap_full();
    nlsp_ = q.model == Model::NLSP;
    for (auto& it : pool.items()) {
      if (it.len > cap) continue;
      double mus = std::pow(it.mu_min, -2.0 * q.s);
      if (!nlsp_) {
        double w, T;
        detail_nr::omega_and_tail(it, I, mp.phi1, w, T);
        ratio1_min_ = std::min(ratio1_min_, std::abs(w) / (it.prod_m2 * mus));
        w_.push_back(w);
        T_.push_back(T);
        b2_.push_back(it.prod_m6);
        mus_.push_back(mus);
      } else {
        double w = detail_nr::omega_nlsp_item(it, I, mp.phi1);
        ratio1_min_ = std::min(ratio1_min_, std::abs(w) / it.prod_m4);
      }
    }
  }

  // min over indices and conditions of LHS/(RHS/gamma) for eps z
  double margin(double eps) const {
    double m = ratio1_min_;
    if (!nlsp_) {
      const double e2 = eps * eps;
      for (std::size_t i = 0; i < w_.size(); ++i) {
        double r2 = std::abs(w_[i] + e2 * T_[i]) / (b2_[i] * std::max(mus_[i], e2));
        m = std::min(m, r2);
      }
    }
    return m;
  }
  double linear_margin() const { return ratio1_min_; }

 private:
  bool nlsp_ = false;
  double ratio1_min_ = std::numeric_limits<double>::infinity();
  std::vector<double> w_, T_, b2_, mus_;
};

// ---------------------------------------------------------------------------
// probability estimation

struct Wilson {
  double phat = 0, lo = 0, hi = 1;
};

inline Wilson wilson95(std::int64_t successes, std::int64_t n) {
  Wilson w;
  if (n == 0) return w;
  const double z = 1.959963984540054;
  double p = double(successes) / double(n);
  double z2 = z * z, denom = 1 + z2 / double(n);
  double centre = p + z2 / (2.0 * n);
  double rad = z * std::sqrt(p * (1 - p) / double(n) + z2 / (4.0 * n * n));
  w.phat = p;
  w.lo = (centre - rad) / denom;
  w.hi = (centre + rad) / denom;
  return w;
}

struct TrialRecord {
  std::uint64_t trial = 0;
  double eps = 0;
  std::string verdict;
  double margin = 0;           // min gamma ratio
  std::string worst_k;         // offending index when violated
};

struct ProbabilityEstimate {
  std::int64_t trials = 0, members = 0, violations = 0, inconclusive = 0;
  Wilson ci;
  std::vector<TrialRecord> records;
};

// P(eps z in the full non-resonant set) over law draws; inconclusive
// verdicts are excluded from the estimate and reported separately.
inline ProbabilityEstimate estimate_probability(const SamplingLaw& law, const NonResonanceParams& q,
                                                std::int64_t trials, const IrrPool& pool,
                                                const ModelParams& mp, bool keep_records = true) {
  ProbabilityEstimate est;
  est.trials = trials;
  for (std::int64_t t = 0; t < trials; ++t) {
    auto I = sample_actions(law, std::uint64_t(t));
    auto rep = in_full_set_actions(I, q, pool, mp, /*actions_are_scaled=*/false);
    TrialRecord rec;
    rec.trial = std::uint64_t(t);
    rec.eps = q.eps;
    rec.margin = rep.margin_stat;
    switch (rep.verdict) {
      case MembershipVerdict::member: est.members++; rec.verdict = "member"; break;
      case MembershipVerdict::violated:
        est.violations++;
        rec.verdict = "violated";
        if (rep.worst_k) rec.worst_k = rep.worst_k->str();
        break;
      case MembershipVerdict::inconclusive: est.inconclusive++; rec.verdict = "inconclusive"; break;
    }
    if (keep_records) est.records.push_back(std::move(rec));
  }
  est.ci = wilson95(est.members, est.members + est.violations);
  return est;
}

// failure rates over a gamma grid from one margin statistic per draw
struct GammaSurveyRow {
  double gamma = 0;
  std::int64_t members = 0, violations = 0, inconclusive = 0;
  Wilson ci;
};

inline std::vector<GammaSurveyRow> survey_gamma(const SamplingLaw& law, NonResonanceParams q,
                                                const std::vector<double>& gammas,
                                                std::int64_t trials, const IrrPool& pool,
                                                const ModelParams& mp) {
  std::vector<GammaSurveyRow> rows(gammas.size());
  for (std::size_t g = 0; g < gammas.size(); ++g) rows[g].gamma = gammas[g];
  for (std::int64_t t = 0; t < trials; ++t) {
    auto I = sample_actions(law, std::uint64_t(t));
    for (std::size_t g = 0; g < gammas.size(); ++g) {
      q.gamma = gammas[g];
      auto rep = in_full_set_actions(I, q, pool, mp, false);
      switch (rep.verdict) {
        case MembershipVerdict::member: rows[g].members++; break;
        case MembershipVerdict::violated: rows[g].violations++; break;
        case MembershipVerdict::inconclusive: rows[g].inconclusive++; break;
      }
    }
  }
  for (auto& r : rows) r.ci = wilson95(r.members, r.members + r.violations);
  return rows;
}

// ---------------------------------------------------------------------------
// the eps-sequence experiment

enum class XnMode { iid, constant };

struct SequenceExperimentResult {
  std::int64_t outer = 0, inner = 0;
  int n_max = 0;
  double nu = 0;                       // inner-frequency threshold
  std::vector<std::vector<int>> ok_counts;  // [outer][n]: inner draws with member at level n
  std::int64_t outer_good = 0;         // outer draws whose inner frequency >= 1 - nu
  double inner_frequency_mean = 0;
};

// Draw I once per outer trial, then test eps_n = eps0 2^{-(n+x_n)} for all
// n <= n_max over inner randomisations of x.
inline SequenceExperimentResult epsilon_sequence_experiment(
    double eps0, const SamplingLaw& law, NonResonanceParams q, int n_max, XnMode mode,
    std::int64_t outer, std::int64_t inner, const IrrPool& pool, const ModelParams& mp,
    double nu = -1) {
  SequenceExperimentResult res;
  res.outer = outer;
  res.inner = inner;
  res.n_max = n_max;
  res.nu = nu > 0 ? nu : std::pow(eps0, 1.0 / 6.0);
  double freq_acc = 0;
  for (std::int64_t o = 0; o < outer; ++o) {
    auto I = sample_actions(law, std::uint64_t(o));
    FullSetMargins margins(I, q, pool, mp);
    std::vector<int> counts(n_max + 1, 0);
    std::int64_t inner_all_ok = 0;
    Rng xr(law.seed ^ 0x5eedu, std::uint64_t(o) + 1);
    for (std::int64_t i = 0; i < inner; ++i) {
      bool all_ok = true;
      double x0 = xr.uniform();
      for (int n = 0; n <= n_max; ++n) {
        double xn = mode == XnMode::constant ? x0 : (n == 0 ? x0 : xr.uniform());
        double eps_n = eps0 * std::pow(2.0, -(n + xn));
        bool member = margins.margin(eps_n) > q.gamma;
        if (member) counts[n]++;
        else all_ok = false;
      }
      if (all_ok) inner_all_ok++;
    }
    freq_acc += double(inner_all_ok) / double(inner);
    if (double(inner_all_ok) / double(inner) >= 1.0 - res.nu) res.outer_good++;
    res.ok_counts.push_back(std::move(counts));
  }
  res.inner_frequency_mean = outer ? freq_acc / double(outer) : 0.0;
  return res;
}

// ---------------------------------------------------------------------------
// partial-fraction lower bound

struct AStarResult {
  int a_star = 0;
  Rat value;      // sum_alpha delta_alpha (a* - a_alpha)^{-2}, exact
  Rat bound;      // (6m)^{-4m} prod <a_alpha>^{-2}, exact
  bool certified = false;
};

inline Rat a_star_value(const MultiIndex& k, int a) {
  Rat v(0);
  for (auto& j : k.entries()) {
    std::int64_t d = std::int64_t(a) - j.a;
    if (d == 0) throw std::invalid_argument("a_star_value: a collides with an entry");
    v += Rat(j.delta, d * d);
  }
  return v;
}

// search a* in [-3m, 3m) avoiding the entries; the certified inequality is
// checked in exact arithmetic, never assumed
inline AStarResult find_a_star(const MultiIndex& k) {
  if (!k.is_irreducible() || k.empty())
    throw std::invalid_argument("find_a_star: input must be a nonempty irreducible multi-index");
  const int m = int(k.size()) / 2;
  Rat bound = pow(Rat(1, 6 * m), unsigned(4 * m));
  for (auto& j : k.entries()) bound *= Rat(1, gauge_sq(j.a));

  AStarResult best;
  best.bound = bound;
  bool have = false;
  for (int a = -3 * m; a < 3 * m; ++a) {
    bool collides = false;
    for (auto& j : k.entries())
      if (j.a == a) { collides = true; break; }
    if (collides) continue;
    Rat v = a_star_value(k, a);
    if (!have || v.abs() > best.value.abs()) {
      best.a_star = a;
      best.value = v;
      have = true;
    }
  }
  best.certified = have && best.value.abs() >= bound;
  return best;
}

}  // namespace rnf
