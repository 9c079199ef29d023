// birkhoff.hpp — the resonant normal-form step: extraction of the effective
// sextic integrable part from (1/2){Q4, chi4}, the frequency cut-off split
// with its weight certificate, and the window-truncated normal form of the
// model Hamiltonian through order 6.

#pragma once

#include "rnf/polynomial.hpp"

#include <map>
#include <tuple>
#include <vector>

namespace rnf {

// Coefficients of the action-only part of (1/2){Q4, chi4}, organised as
//   sum_a alpha_a I_a^3 + sum_{a != b} beta_ab I_a^2 I_b
//   + sum_{distinct} gamma_abc I_a I_b I_c,
// plus the irreducible resonant leftover (computed, expected to vanish).
struct SexticExtraction {
  int window = 0;
  std::map<int, Coeff> alpha;                      // coefficient of I_a^3
  std::map<std::pair<int, int>, Coeff> beta;       // coefficient of I_a^2 I_b, a != b
  std::map<std::tuple<int, int, int>, Coeff> gamma;  // unordered distinct triples (total/6)
  Poly action_part;       // the full action-only polynomial
  Poly irreducible_part;  // resonant irreducible leftover
  Poly bracket;           // (1/2){Q4, chi4} itself
};

// Decompose an action-only sextic monomial into its (a,b,c) pattern.
// Returns half-degree exponents per mode, e.g. I_a^2 I_b -> {(a,2),(b,1)}.
inline std::vector<std::pair<int, int>> action_pattern(const MultiIndex& j) {
  std::vector<std::pair<int, int>> out;
  const auto& e = j.entries();
  std::size_t i = 0;
  while (i < e.size()) {
    std::size_t k = i;
    int plus = 0, minus = 0;
    while (k < e.size() && e[k].a == e[i].a) { (e[k].delta > 0 ? plus : minus)++; ++k; }
    if (plus != minus) throw std::logic_error("action_pattern: not an action monomial");
    out.emplace_back(e[i].a, plus);
    i = k;
  }
  return out;
}

inline SexticExtraction extract_z6_oracle(int K) {
  SexticExtraction out;
  out.window = K;
  // extended operands + restricted output = boundary-exact tables
  Poly Q4 = q4_poly_extended(K), X4 = chi4_extended(K);
  Poly B = poisson_poly(Q4, X4, K).scaled(Rat(1, 2));
  out.bracket = B;
  out.action_part = B.action_part();
  out.irreducible_part = B.irreducible_part();

  for (auto& [j, c] : out.action_part.coeffs()) {
    Coeff total = c.scaled(Rat(orderings(j)));
    auto pat = action_pattern(j);
    if (pat.size() == 1) {
      out.alpha[pat[0].first] = total;
    } else if (pat.size() == 2) {
      auto [a, ma] = pat[0];
      auto [b, mb] = pat[1];
      if (ma == 2) out.beta[{a, b}] = total;
      else out.beta[{b, a}] = total;
    } else {
      out.gamma[{pat[0].first, pat[1].first, pat[2].first}] = total;
    }
  }
  return out;
}

// expected beta coefficient -phi'(0)^2 / (2(a-b)^2)
inline Coeff beta_expected(int a, int b) {
  return Coeff::gen(0, 2, 0, Rat(-1, 2 * std::int64_t(a - b) * (a - b)));
}

// ---------------------------------------------------------------------------
// frequency truncation of a resonant polynomial

struct TruncationSplit {
  Poly kept;   // monomials with <mu_3> <= nu * N
  Poly rest;   // the complementary tail
  double nu = 0;
  bool certificate_ok = true;            // every kept monomial has <mu_1(Irr)> <= N^2
  std::vector<MultiIndex> certificate_failures;
};

inline TruncationSplit truncate_resonant(const Poly& K2m, double N, double nu = -1) {
  const int m = K2m.half_degree();
  TruncationSplit out;
  out.nu = nu > 0 ? nu : 1.0 / (2.0 * m);
  out.kept = Poly(m);
  out.rest = Poly(m);
  for (auto& [j, c] : K2m.coeffs()) {
    if (j.size() < 6) throw std::invalid_argument("truncate_resonant: degree below sextic");
    if (j.mu(3) <= out.nu * N) {
      out.kept.add(j, c);
      auto irr = j.irreducible_part();
      if (!irr.empty() && irr.mu1() > N * N) {
        out.certificate_ok = false;
        out.certificate_failures.push_back(j);
      }
    } else {
      out.rest.add(j, c);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// window-truncated resonant normal form of the model through order 6

struct BnfResult {
  int window = 0;
  Poly z2, z4, k6;    // Z2, Z4, and the irreducible resonant sextic part
  Poly z6_action;     // action-only sextic part (should assemble to Z6)
  Poly chi4, chi6;    // generators of the two polynomial elimination steps
  Poly h6;            // full degree-6 part after the quartic step
};

// Degree-by-degree Lie expansion of H o Phi^{-1}_chi for the model
// H = Z2 + P4 + P6 on the window, eliminating non-resonant monomials of
// order 4 and 6.  Everything is exact in the formal generators.
inline BnfResult desk_birkhoff_normal_form(int K) {
  BnfResult r;
  r.window = K;
  r.z2 = z2_poly(K);
  Poly P6 = p2m_coefficients(3, K);
  r.chi4 = chi4(K);
  r.z4 = z4_poly(K);

  // degree-6 part of H o Phi^{-1}_{chi4}:
  //   P6 + {P4, chi4} + (1/2){{Z2, chi4}, chi4}
  // computed with extended operands so the window-K output is exactly the
  // full-lattice normal form restricted to the window
  Poly P4x = p4_poly_extended(K), X4x = chi4_extended(K);
  Poly b1 = poisson_poly(P4x, X4x, K);
  Poly b2 = poisson_poly(poisson_poly(z2_poly(3 * K), X4x), X4x, K).scaled(Rat(1, 2));
  r.h6 = P6 + b1 + b2;

  // second step: kill the non-resonant sextic part with Z2
  Poly nr = r.h6.nonresonant_part();
  Poly x6(3);
  for (auto& [j, c] : nr.coeffs())
    x6.add(j, c.times_i(3).scaled(Rat(1) / Rat(j.laplacian())));  // c / (i Delta_j)
  r.chi6 = x6;

  Poly res = r.h6.resonant_part();
  r.z6_action = res.action_part();
  r.k6 = res.irreducible_part();
  return r;
}

}  // namespace rnf
