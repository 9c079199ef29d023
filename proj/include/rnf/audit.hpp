// audit.hpp — randomized closure audit of the rational bracket: random
// subclass pairs are bracketed and the output is checked for subclass
// membership at the composed order, the weight bound, a derivative
// distribution certificate, and agreement with the numeric Poisson oracle.

#pragma once

#include "rnf/enumerate.hpp"
#include "rnf/rational_terms.hpp"
#include "rnf/sampling.hpp"

#include <string>
#include <vector>

namespace rnf {

// irreducible resonant sextics with a small mu_min: usable as divisor
// indices and numerator cores that admit derivative-distribution witnesses
inline std::vector<MultiIndex> small_mu_irr_pool(int K) {
  std::vector<MultiIndex> pool;
  for (auto& k : enumerate_class(3, K, ClassTag::R, true))
    if (k.mu_min() <= gauge(1)) pool.push_back(k);
  return pool;
}

inline MultiIndex with_action_pairs(const MultiIndex& core, const std::vector<int>& pairs) {
  std::vector<ModeIndex> v = core.entries();
  for (int a : pairs) {
    v.push_back({+1, a});
    v.push_back({-1, a});
  }
  return MultiIndex(std::move(v));
}

// Random reality-closed Hamiltonian in the requested subclass at order r,
// built directly from an alpha witness so membership holds by construction.
inline RationalHamiltonian random_subclass_ham(Rng& rng, int r, SubclassTag tag, int K,
                                               int base_terms,
                                               const std::vector<MultiIndex>& pool) {
  const bool star = tag == SubclassTag::r_omega_star || tag == SubclassTag::r_Omega_star;
  const bool omega_class = tag == SubclassTag::r_omega || tag == SubclassTag::r_omega_star;
  RationalHamiltonian H(K);
  auto pick = [&]() { return pool[rng.next_u64() % pool.size()]; };

  for (int t = 0; t < base_terms; ++t) {
    RationalTerm term;
    int n, p, q;
    if (omega_class) {
      int cap = std::max(0, star ? 2 * (r + 1) - 5 : 2 * r - 6);
      n = int(rng.next_u64() % (cap + 1));
      p = n;
      q = 0;
      term.alpha = {n, 0, 0, 0, 0};
    } else {
      int cap1 = std::max(0, star ? 2 * (r + 2) - 6 : 2 * r - 6);
      int cap5 = std::max(0, star ? (r + 2) - 4 : r - 4);
      int a5 = int(rng.next_u64() % (cap5 + 1));
      int a1 = int(rng.next_u64() % (cap1 + 1));
      int budget = a5;
      int a2 = budget ? int(rng.next_u64() % (budget + 1)) : 0;
      budget -= a2;
      int a3 = budget ? int(rng.next_u64() % (budget + 1)) : 0;
      budget -= a3;
      int a4 = budget ? int(rng.next_u64() % (budget + 1)) : 0;
      term.alpha = {a1, a2, a3, a4, a5};
      n = a1 + a2;
      p = n + a3;
      q = a4 + a5 + (star ? 1 : 0);
    }
    const int m = r + p + 2 * q;
    if (m >= 3) {
      std::vector<int> pairs;
      for (int i = 0; i < m - 3; ++i) pairs.push_back(int(rng.next_u64() % (2 * K + 1)) - K);
      term.pi = with_action_pairs(pick(), pairs);
    } else {
      std::vector<ModeIndex> v;
      for (int i = 0; i < m; ++i) {
        int a = int(rng.next_u64() % (2 * K + 1)) - K;
        v.push_back({+1, a});
        v.push_back({-1, a});
      }
      term.pi = MultiIndex(std::move(v));
    }
    for (int i = 0; i < n; ++i) term.k_omega.push_back(pick());
    for (int i = 0; i < p - n; ++i) term.k_Omega.push_back(pick());
    for (int i = 0; i < q; ++i) term.h_Omega.push_back(pick());
    term.c = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    term.canonicalize();
    RationalTerm conj = term.conjugated();
    H.terms.push_back(std::move(term));
    H.terms.push_back(std::move(conj));
  }
  H.merge();
  return H;
}

// random real state keeping every divisor magnitude of the given
// Hamiltonians above the cut (relative to the action scale)
inline FourierState nonresonant_sample(Rng& rng, int K, const ModelParams& mp,
                                       const std::vector<const RationalHamiltonian*>& hams,
                                       double amp = 0.6, double cut = 1e-4) {
  for (int attempt = 0; attempt < 500; ++attempt) {
    auto z = random_state(K, rng, amp);
    auto I = as_generic(actions_of(z));
    auto fp = FreqParams<double>::from(mp, K);
    double scale = 0;
    for (int a = -K; a <= K; ++a) scale = std::max(scale, I[a]);
    bool ok = true;
    for (auto* H : hams) {
      for (auto& t : H->terms) {
        for (auto& k : t.k_omega)
          if (std::abs(omega(k, I, fp)) < cut * scale * std::abs(mp.phi1)) ok = false;
        for (auto& k : t.k_Omega)
          if (std::abs(omega_big(k, I, fp)) < cut * scale * std::abs(mp.phi1)) ok = false;
        for (auto& h : t.h_Omega)
          if (std::abs(omega_big(h, I, fp)) < cut * scale * std::abs(mp.phi1)) ok = false;
        if (!ok) break;
      }
      if (!ok) break;
    }
    if (ok) return z;
  }
  throw std::runtime_error("nonresonant_sample: no draw cleared the denominator cut");
}

struct AuditTrial {
  std::int64_t trial = 0;
  std::string mode;
  int r_a = 0, r_b = 0;
  bool nonempty = false;
  bool subclass_ok = false, order_ok = false, weight_ok = false, certificate_ok = false,
       oracle_ok = false;
  double max_rel_err = 0;
  bool passed() const {
    return !nonempty || (subclass_ok && order_ok && weight_ok && certificate_ok && oracle_ok);
  }
};

struct AuditSummary {
  std::int64_t total = 0, passed = 0, empty_outputs = 0;
  std::vector<AuditTrial> trials;
};

inline AuditSummary bracket_closure_audit(std::int64_t trials, std::uint64_t seed,
                                          const ModelParams& mp, int K = 5,
                                          int oracle_points = 20, double tol = 1e-9,
                                          double cert_C_scale = 6.0) {
  AuditSummary sum;
  auto pool = small_mu_irr_pool(K);
  Rng rng(seed);
  for (std::int64_t t = 0; t < trials; ++t) {
    AuditTrial at;
    at.trial = t;
    bool omega_mode = t % 2 == 0;
    at.mode = omega_mode ? "omega" : "Omega";
    at.r_a = 2 + int(rng.next_u64() % 3);
    at.r_b = omega_mode ? 3 + int(rng.next_u64() % 2) : 4;
    auto A = random_subclass_ham(rng, at.r_a,
                                 omega_mode ? SubclassTag::r_omega_star : SubclassTag::r_Omega_star,
                                 K, 1 + int(rng.next_u64() % 2), pool);
    auto B = random_subclass_ham(rng, at.r_b, omega_mode ? SubclassTag::r_omega : SubclassTag::r_Omega,
                                 K, 1 + int(rng.next_u64() % 2), pool);
    auto AB = bracket(A, B, mp);
    at.nonempty = !AB.empty();
    if (!at.nonempty) {
      sum.empty_outputs++;
      sum.trials.push_back(at);
      sum.total++;
      sum.passed++;
      continue;
    }
    auto rep = subclass_check(AB, omega_mode ? SubclassTag::r_omega : SubclassTag::r_Omega);
    at.subclass_ok = rep.ok;
    at.order_ok = rep.ok && rep.r == at.r_a + at.r_b - 1;
    at.weight_ok = AB.weight() <= std::max(A.weight(), B.weight()) + 1e-12;
    at.certificate_ok =
        distribute_derivatives_certificate(AB, cert_C_scale * std::max(1, at.r_a + at.r_b - 1)).ok;

    RationalFunctional fa(A, mp), fb(B, mp);
    Rng zr(seed ^ 0xabcdu, std::uint64_t(t));
    at.oracle_ok = true;
    for (int i = 0; i < oracle_points; ++i) {
      auto z = nonresonant_sample(zr, K, mp, {&A, &B, &AB});
      Complex sym = evaluate(AB, z, mp);
      Complex num = poisson_numeric(fa, fb, z);
      double rel = std::abs(sym - num) / std::max(1.0, std::abs(sym));
      at.max_rel_err = std::max(at.max_rel_err, rel);
      if (rel > tol) at.oracle_ok = false;
    }
    sum.total++;
    if (at.passed()) sum.passed++;
    sum.trials.push_back(at);
  }
  return sum;
}

}  // namespace rnf
