// rational_terms.hpp — the rational Hamiltonian class: monomials divided by
// products of small denominators, closed under Poisson bracket.
//
// A term is   c * (-i)^(p+q) * z_pi / ( prod_n omega_k  prod_{p-n} Omega_k
//                                       prod_q Omega_h )
// with pi resonant and every divisor index irreducible.  The three divisor
// sections record which non-resonance floor controls the factor (omega,
// Omega at the eps^2 floor, Omega at the eps^4 floor); the alpha vector
// tracks how the term was produced so the subclass numerology stays
// auditable after every bracket.

#pragma once

#include "rnf/frequencies.hpp"
#include "rnf/indices.hpp"
#include "rnf/model.hpp"
#include "rnf/poisson_numeric.hpp"
#include "rnf/polynomial.hpp"
#include "rnf/state.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rnf {

struct DenominatorFloorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TermBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-resonance floors for guarded evaluation: refuse to divide when a
// denominator is below the bound the theory itself guarantees.
struct DenominatorFloor {
  bool enabled = false;
  double gamma = 0.1, eps = 0.1, N = 1.0, alpha_r = 48.0, s = 4.0;

  double omega_floor(double mu_min) const {
    return gamma * eps * eps * std::pow(N, -alpha_r) * std::pow(mu_min, -2.0 * s);
  }
  double Omega_k_floor(double mu_min) const { return omega_floor(mu_min); }
  double Omega_h_floor() const { return gamma * std::pow(eps, 4) * std::pow(N, -alpha_r); }
};

enum class DivisorKind { omega, Omega_k, Omega_h };

struct RationalTerm {
  Complex c{0.0, 0.0};
  MultiIndex pi;
  std::vector<MultiIndex> k_omega;   // omega divisors            (n of them)
  std::vector<MultiIndex> k_Omega;   // eps^2-controlled Omega    (p - n)
  std::vector<MultiIndex> h_Omega;   // eps^4-controlled Omega    (q)
  std::array<int, 5> alpha{0, 0, 0, 0, 0};
  bool alpha_valid = true;

  int m() const { return int(pi.size()) / 2; }
  int n() const { return int(k_omega.size()); }
  int p() const { return n() + int(k_Omega.size()); }
  int q() const { return int(h_Omega.size()); }
  int order() const { return m() - p() - 2 * q(); }

  void canonicalize() {
    std::sort(k_omega.begin(), k_omega.end());
    std::sort(k_Omega.begin(), k_Omega.end());
    std::sort(h_Omega.begin(), h_Omega.end());
  }

  RationalTerm conjugated() const {
    RationalTerm t = *this;
    t.c = std::conj(c);
    t.pi = pi.conjugate();
    for (auto& k : t.k_omega) k = k.conjugate();
    for (auto& k : t.k_Omega) k = k.conjugate();
    for (auto& h : t.h_Omega) h = h.conjugate();
    t.canonicalize();
    return t;
  }

  double weight() const {
    double w = 0.0;
    auto irr = pi.irreducible_part();
    if (!irr.empty()) w = irr.mu1();
    for (auto& k : k_omega) w = std::max(w, k.mu1());
    for (auto& k : k_Omega) w = std::max(w, k.mu1());
    for (auto& h : h_Omega) w = std::max(w, h.mu1());
    return w;
  }

  bool same_structure(const RationalTerm& o) const {
    return pi == o.pi && k_omega == o.k_omega && k_Omega == o.k_Omega && h_Omega == o.h_Omega &&
           alpha == o.alpha && alpha_valid == o.alpha_valid;
  }

  friend bool operator<(const RationalTerm& x, const RationalTerm& y) {
    if (!(x.pi == y.pi)) return x.pi < y.pi;
    auto lex = [](const std::vector<MultiIndex>& a, const std::vector<MultiIndex>& b) {
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()) ? -1
             : std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end()) ? 1
                                                                                    : 0;
    };
    if (int c = lex(x.k_omega, y.k_omega)) return c < 0;
    if (int c = lex(x.k_Omega, y.k_Omega)) return c < 0;
    if (int c = lex(x.h_Omega, y.h_Omega)) return c < 0;
    if (x.alpha != y.alpha) return x.alpha < y.alpha;
    return x.alpha_valid < y.alpha_valid;
  }
};

class RationalHamiltonian {
 public:
  int window = 0;
  std::vector<RationalTerm> terms;

  RationalHamiltonian() = default;
  explicit RationalHamiltonian(int K) : window(K) {}

  static RationalHamiltonian from_poly(const Poly& P, const ModelParams& mp, int K) {
    RationalHamiltonian H(K);
    for (auto& [j, v] : P.coeffs()) {
      RationalTerm t;
      t.c = v.eval(mp.phi0, mp.phi1, mp.phi2) * double(orderings(j));
      t.pi = j;
      H.terms.push_back(std::move(t));
    }
    return H;
  }

  std::size_t size() const { return terms.size(); }
  bool empty() const { return terms.empty(); }

  void merge() {
    std::sort(terms.begin(), terms.end());
    std::vector<RationalTerm> out;
    for (auto& t : terms) {
      if (!out.empty() && out.back().same_structure(t)) out.back().c += t.c;
      else out.push_back(t);
    }
    std::erase_if(out, [](const RationalTerm& t) { return t.c == Complex{0.0, 0.0}; });
    terms = std::move(out);
  }
  void prune(double tol) {
    double mx = 0;
    for (auto& t : terms) mx = std::max(mx, std::abs(t.c));
    std::erase_if(terms, [&](const RationalTerm& t) { return std::abs(t.c) <= tol * mx; });
  }

  double weight() const {
    double w = 0;
    for (auto& t : terms)
      if (std::abs(t.c) > 0) w = std::max(w, t.weight());
    return w;
  }
  int order() const {
    if (terms.empty()) return 0;
    int r = terms.front().order();
    for (auto& t : terms)
      if (t.order() != r) throw std::logic_error("RationalHamiltonian: mixed term orders");
    return r;
  }

  bool is_reality_closed(double tol = 1e-12) const {
    for (auto& t : terms) {
      auto tc = t.conjugated();
      bool found = false;
      for (auto& o : terms)
        if (o.pi == tc.pi && o.k_omega == tc.k_omega && o.k_Omega == tc.k_Omega &&
            o.h_Omega == tc.h_Omega && std::abs(o.c - tc.c) <= tol * std::max(1.0, std::abs(o.c))) {
          found = true;
          break;
        }
      if (!found) return false;
    }
    return true;
  }

  RationalHamiltonian action_part() const {
    RationalHamiltonian H(window);
    for (auto& t : terms)
      if (t.pi.irreducible_part().empty()) H.terms.push_back(t);
    return H;
  }
  RationalHamiltonian non_action_part() const {
    RationalHamiltonian H(window);
    for (auto& t : terms)
      if (!t.pi.irreducible_part().empty()) H.terms.push_back(t);
    return H;
  }

  friend RationalHamiltonian operator+(const RationalHamiltonian& a, const RationalHamiltonian& b) {
    RationalHamiltonian r = a;
    r.terms.insert(r.terms.end(), b.terms.begin(), b.terms.end());
    r.merge();
    return r;
  }
  RationalHamiltonian scaled(Complex s) const {
    RationalHamiltonian r = *this;
    for (auto& t : r.terms) t.c *= s;
    return r;
  }
};

// ---------------------------------------------------------------------------
// evaluation

namespace detail_rat {

inline Complex divisor_value(DivisorKind kind, const MultiIndex& k, const Actions<Complex>& I,
                             const FreqParams<Complex>& fp, const DenominatorFloor& floor) {
  Complex w;
  if (kind == DivisorKind::omega) {
    w = omega(k, I, fp);
    if (floor.enabled && std::abs(w) < floor.omega_floor(k.mu_min()))
      throw DenominatorFloorError("omega denominator below floor at k = " + k.str());
  } else {
    w = omega_big(k, I, fp);
    double f = kind == DivisorKind::Omega_k ? floor.Omega_k_floor(k.mu_min()) : floor.Omega_h_floor();
    if (floor.enabled && std::abs(w) < f)
      throw DenominatorFloorError("Omega denominator below floor at k = " + k.str());
  }
  if (w == Complex{0.0, 0.0}) throw DenominatorFloorError("exactly resonant denominator at k = " + k.str());
  return w;
}

inline Complex i_pow_minus(int k) {  // (-i)^k
  switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, -1};
    case 2: return {-1, 0};
    default: return {0, 1};
  }
}

// d/dI_a of a divisor at actions I
inline Complex divisor_dI(DivisorKind kind, const MultiIndex& k, int a, const Actions<Complex>& I,
                          const FreqParams<Complex>& fp) {
  double net = 0;
  for (auto& [b, nd] : k.net_deltas())
    if (b == a) net = double(nd);
  Complex w = -fp.phi1 * net;
  if (kind == DivisorKind::omega) return w;
  for (auto& j : k.entries()) w += double(j.delta) * d2z6(I, fp, j.a, a);
  return w;
}

}  // namespace detail_rat

inline FreqParams<Complex> complex_freq_params(const ModelParams& p, int W) {
  return {Complex(p.phi0), Complex(p.phi1), Complex(p.phi2), p.model, p.tail(W)};
}

inline Complex evaluate(const RationalHamiltonian& H, const FourierState& z, const ModelParams& mp,
                        const DenominatorFloor& floor = {}) {
  if (z.window() != H.window)
    throw std::invalid_argument("evaluate: state window must match the Hamiltonian window");
  auto I = complex_actions_of(z);
  auto fp = complex_freq_params(mp, H.window);
  Complex acc{0, 0};
  for (auto& t : H.terms) {
    Complex v = t.c * detail_rat::i_pow_minus(t.p() + t.q()) * z.z_monomial(t.pi);
    for (auto& k : t.k_omega) v /= detail_rat::divisor_value(DivisorKind::omega, k, I, fp, floor);
    for (auto& k : t.k_Omega) v /= detail_rat::divisor_value(DivisorKind::Omega_k, k, I, fp, floor);
    for (auto& h : t.h_Omega) v /= detail_rat::divisor_value(DivisorKind::Omega_h, h, I, fp, floor);
    acc += v;
  }
  return acc;
}

// analytic gradient: numerator Leibniz terms plus the denominator terms
// -z_pi z_j0 sum(dW/W) per coordinate
inline void add_gradient(const RationalHamiltonian& H, const FourierState& z, const ModelParams& mp,
                         Gradient& g, const DenominatorFloor& floor = {}) {
  if (z.window() != H.window)
    throw std::invalid_argument("gradient: state window must match the Hamiltonian window");
  const int K = H.window;
  auto I = complex_actions_of(z);
  auto fp = complex_freq_params(mp, K);

  for (auto& t : H.terms) {
    // divisor values and the full denominator
    std::vector<std::pair<DivisorKind, const MultiIndex*>> divs;
    for (auto& k : t.k_omega) divs.push_back({DivisorKind::omega, &k});
    for (auto& k : t.k_Omega) divs.push_back({DivisorKind::Omega_k, &k});
    for (auto& h : t.h_Omega) divs.push_back({DivisorKind::Omega_h, &h});
    Complex denom{1, 0};
    std::vector<Complex> wvals(divs.size());
    for (std::size_t d = 0; d < divs.size(); ++d) {
      wvals[d] = detail_rat::divisor_value(divs[d].first, *divs[d].second, I, fp, floor);
      denom *= wvals[d];
    }
    Complex C = t.c * detail_rat::i_pow_minus(t.p() + t.q()) / denom;

    // numerator part
    const auto& e = t.pi.entries();
    std::size_t i = 0;
    while (i < e.size()) {
      std::size_t k = i;
      while (k < e.size() && e[k] == e[i]) ++k;
      if (e[i].a >= -K && e[i].a <= K) {
        Complex rest{1, 0};
        for (std::size_t u = 0; u < e.size(); ++u)
          if (u != i) rest *= z.z(e[u]);
        Complex val = C * double(k - i) * rest;
        if (e[i].delta > 0) g.dxi[e[i].a + K] += val;
        else g.deta[e[i].a + K] += val;
      }
      i = k;
    }

    // denominator part: -(z_pi) * (sum_d dW_d/dI_a / W_d) * (eta_a or xi_a)
    if (!divs.empty()) {
      Complex zpi = z.z_monomial(t.pi);
      for (int a = -K; a <= K; ++a) {
        Complex sum{0, 0};
        for (std::size_t d = 0; d < divs.size(); ++d)
          sum += detail_rat::divisor_dI(divs[d].first, *divs[d].second, a, I, fp) / wvals[d];
        if (sum == Complex{0.0, 0.0}) continue;
        g.dxi[a + K] += -C * zpi * sum * z.eta(a);
        g.deta[a + K] += -C * zpi * sum * z.xi(a);
      }
    }
  }
}

class RationalFunctional : public Functional {
  const RationalHamiltonian* H_;
  ModelParams p_;
  DenominatorFloor floor_;

 public:
  RationalFunctional(const RationalHamiltonian& H, const ModelParams& p,
                     const DenominatorFloor& floor = {})
      : H_(&H), p_(p), floor_(floor) {}
  Complex value(const FourierState& z) const override { return evaluate(*H_, z, p_, floor_); }
  bool gradient(const FourierState& z, Gradient& g) const override {
    g = Gradient(z.window());
    add_gradient(*H_, z, p_, g, floor_);
    return true;
  }
};

// ---------------------------------------------------------------------------
// Poisson bracket, closed on the class

struct BracketOptions {
  std::size_t max_terms = 200000;
  bool track_alpha = true;
};

// {A, B} with A in a starred class and B unstarred (or the reverse); the
// denominator-denominator pairings cancel identically because functions of
// the actions Poisson-commute.
inline RationalHamiltonian bracket(const RationalHamiltonian& A, const RationalHamiltonian& B,
                                   const ModelParams& mp, const BracketOptions& opt = {}) {
  if (A.window != B.window) throw std::invalid_argument("bracket: window mismatch");
  const int K = A.window;
  auto fp = FreqParams<double>::from(mp, K);
  RationalHamiltonian out(K);

  auto guard = [&]() {
    if (out.terms.size() > opt.max_terms)
      throw TermBudgetError("bracket: term budget exceeded (" + std::to_string(out.terms.size()) + ")");
  };

  auto alpha_sum = [&](const RationalTerm& s, const RationalTerm& t, int bump2, int bump3, int bump4,
                       int bump5) {
    std::array<int, 5> a{};
    for (int i = 0; i < 5; ++i) a[i] = s.alpha[i] + t.alpha[i];
    a[1] += bump2;  // alpha_2
    a[2] += bump3;  // alpha_3
    a[3] += bump4;  // alpha_4
    a[4] += bump5;  // alpha_5
    return a;
  };

  for (auto& s : A.terms)
    for (auto& t : B.terms) {
      const Complex Cs = s.c * detail_rat::i_pow_minus(s.p() + s.q());
      const Complex Ct = t.c * detail_rat::i_pow_minus(t.p() + t.q());

      // ---- Type I: numerator x numerator contractions --------------------
      {
        auto occ = [](const MultiIndex& j) {
          std::vector<std::array<int, 3>> o;  // mode, plus, minus
          const auto& e = j.entries();
          std::size_t i = 0;
          while (i < e.size()) {
            std::size_t k = i;
            int plus = 0, minus = 0;
            while (k < e.size() && e[k].a == e[i].a) { (e[k].delta > 0 ? plus : minus)++; ++k; }
            o.push_back({e[i].a, plus, minus});
            i = k;
          }
          return o;
        };
        auto remove_one = [](const MultiIndex& j, ModeIndex what) {
          std::vector<ModeIndex> v = j.entries();
          for (auto it = v.begin(); it != v.end(); ++it)
            if (*it == what) { v.erase(it); break; }
          return v;
        };
        for (auto& os : occ(s.pi))
          for (auto& ot : occ(t.pi)) {
            if (os[0] != ot[0]) continue;
            const int a = os[0];
            for (int dir = 0; dir < 2; ++dir) {
              int mult = dir == 0 ? os[1] * ot[2] : os[2] * ot[1];
              if (mult == 0) continue;
              auto v = remove_one(s.pi, {dir == 0 ? +1 : -1, a});
              auto w = remove_one(t.pi, {dir == 0 ? -1 : +1, a});
              v.insert(v.end(), w.begin(), w.end());
              RationalTerm r;
              r.pi = MultiIndex(std::move(v));
              r.k_omega = s.k_omega;
              r.k_omega.insert(r.k_omega.end(), t.k_omega.begin(), t.k_omega.end());
              r.k_Omega = s.k_Omega;
              r.k_Omega.insert(r.k_Omega.end(), t.k_Omega.begin(), t.k_Omega.end());
              r.h_Omega = s.h_Omega;
              r.h_Omega.insert(r.h_Omega.end(), t.h_Omega.begin(), t.h_Omega.end());
              Complex raw = Complex{0, 1} * Cs * Ct * double(dir == 0 ? mult : -mult);
              r.c = raw / detail_rat::i_pow_minus(r.p() + r.q());
              r.alpha = alpha_sum(s, t, 0, 0, 0, 1);
              r.alpha_valid = s.alpha_valid && t.alpha_valid && opt.track_alpha;
              r.canonicalize();
              out.terms.push_back(std::move(r));
            }
          }
        guard();
      }

      // ---- Types II-IV: one divisor differentiated against a numerator ---
      // contribution of divisor W_d of X against the numerator of Y:
      //   i * sign * C_X C_Y * F(I) * z_{piX} z_{piY} / (D_X D_Y W_d)
      // with F(I) = sum_a dW_d/dI_a * netdelta(piY, a) and sign = +1 when the
      // divisor belongs to the first bracket slot, -1 otherwise.
      auto divisor_events = [&](const RationalTerm& X, const RationalTerm& Y, double sign) {
        struct Dv { DivisorKind kind; const MultiIndex* k; int section_index; };
        std::vector<Dv> divs;
        for (std::size_t i = 0; i < X.k_omega.size(); ++i)
          divs.push_back({DivisorKind::omega, &X.k_omega[i], int(i)});
        for (std::size_t i = 0; i < X.k_Omega.size(); ++i)
          divs.push_back({DivisorKind::Omega_k, &X.k_Omega[i], int(i)});
        for (std::size_t i = 0; i < X.h_Omega.size(); ++i)
          divs.push_back({DivisorKind::Omega_h, &X.h_Omega[i], int(i)});

        auto net_t = Y.pi.net_deltas();
        for (auto& dv : divs) {
          // constant part: -phi1 * sum_a netdelta(d,a) netdelta(piY,a)
          double c0 = 0;
          for (auto& [a, nd] : dv.k->net_deltas())
            for (auto& [b, ne] : net_t)
              if (a == b) c0 += -fp.phi1 * double(nd) * double(ne);

          auto push = [&](Complex factor, bool add_action_pair, int pair_mode, bool new_copy_to_h) {
            RationalTerm r;
            std::vector<ModeIndex> v = s.pi.entries();
            auto w = t.pi.entries();
            v.insert(v.end(), w.begin(), w.end());
            if (add_action_pair) {
              v.push_back({+1, pair_mode});
              v.push_back({-1, pair_mode});
            }
            r.pi = MultiIndex(std::move(v));
            r.k_omega = s.k_omega;
            r.k_omega.insert(r.k_omega.end(), t.k_omega.begin(), t.k_omega.end());
            r.k_Omega = s.k_Omega;
            r.k_Omega.insert(r.k_Omega.end(), t.k_Omega.begin(), t.k_Omega.end());
            r.h_Omega = s.h_Omega;
            r.h_Omega.insert(r.h_Omega.end(), t.h_Omega.begin(), t.h_Omega.end());
            // the differentiated divisor appears squared: classify the extra copy
            if (dv.kind == DivisorKind::omega) {
              r.k_omega.push_back(*dv.k);
              r.alpha = alpha_sum(s, t, 1, 0, 0, 1);
            } else if (!new_copy_to_h) {
              r.k_Omega.push_back(*dv.k);  // pole part: k/h split puts it in k
              r.alpha = alpha_sum(s, t, 0, 1, 0, 1);
            } else {
              r.h_Omega.push_back(*dv.k);  // polynomial part: extra eps^4 divisor
              r.alpha = alpha_sum(s, t, 0, 0, 1, 1);
            }
            r.alpha_valid = s.alpha_valid && t.alpha_valid && opt.track_alpha;
            Complex raw = Complex{0, 1} * sign * Cs * Ct * factor;
            r.c = raw / detail_rat::i_pow_minus(r.p() + r.q());
            if (r.c != Complex{0, 0}) {
              r.canonicalize();
              out.terms.push_back(std::move(r));
            }
          };

          if (c0 != 0.0) push(Complex{c0, 0}, false, 0, false);

          if (dv.kind != DivisorKind::omega) {
            // affine part of dOmega/dI: for each window mode q_mode the
            // coefficient kappa_q = sum_{a,beta} netdelta(piY,a) delta_beta
            // d2z6_coeff(a_beta, a, q); contributes kappa_q I_q z_pi'' terms
            for (int qm = -K; qm <= K; ++qm) {
              double kq = 0;
              for (auto& [a, ne] : net_t)
                for (auto& jj : dv.k->entries())
                  kq += double(ne) * double(jj.delta) * d2z6_coeff(fp, jj.a, a, qm);
              if (kq != 0.0) push(Complex{kq, 0}, true, qm, true);
            }
          }
        }
        guard();
      };
      divisor_events(s, t, +1.0);
      // divisors of B against the numerator of A: sign flipped, same layout
      divisor_events(t, s, -1.0);
    }

  out.merge();
  return out;
}

// ---------------------------------------------------------------------------
// homological equations

enum class HomologicalMode { Z4, Z4Z6 };

// Returns chi with {Z4, chi} = H (mode Z4) or {Z4 + Z6, chi} = H (mode Z4Z6):
// each term is divided by the small denominator of its irreducible numerator
// part, appended as an omega divisor (Z4) or an eps^4 Omega divisor (Z4Z6).
// Terms depending only on the actions are not solvable and must be split off
// beforehand.
inline RationalHamiltonian solve_homological(const RationalHamiltonian& H, HomologicalMode mode) {
  RationalHamiltonian chi(H.window);
  for (auto& t : H.terms) {
    auto irr = t.pi.irreducible_part();
    if (irr.empty())
      throw std::invalid_argument("solve_homological: action-only term present at pi = " + t.pi.str());
    RationalTerm r = t;
    r.c = -t.c;  // {Z, z_pi/D} = -i W_pi z_pi / D and the (-i)^{p+q} convention
    if (mode == HomologicalMode::Z4) r.k_omega.push_back(irr);
    else r.h_Omega.push_back(irr);
    r.canonicalize();
    chi.terms.push_back(std::move(r));
  }
  return chi;
}

// A/R decomposition: Q = Q_A + Q_R with Q_A the action-only part.
inline std::pair<RationalHamiltonian, RationalHamiltonian> split_action_irreducible(
    const RationalHamiltonian& H) {
  return {H.action_part(), H.non_action_part()};
}

// ---------------------------------------------------------------------------
// subclass bookkeeping

enum class SubclassTag { r_omega, r_omega_star, r_Omega, r_Omega_star };

inline const char* to_string(SubclassTag t) {
  switch (t) {
    case SubclassTag::r_omega: return "H_{r,omega}";
    case SubclassTag::r_omega_star: return "H*_{r,omega}";
    case SubclassTag::r_Omega: return "H_{r,Omega}";
    default: return "H*_{r,Omega}";
  }
}

struct SubclassReport {
  bool ok = false;
  int r = 0;
  SubclassTag tag{};
  std::vector<std::array<int, 5>> alphas;  // witness per term (Omega classes)
  std::string violation;
};

namespace detail_rat {

// greedy alpha witness: alpha1+alpha2 = n, alpha3 = p-n, alpha4+alpha5 = qq,
// alpha2+alpha3+alpha4 <= alpha5, alpha1 <= cap1, alpha5 <= cap5.
// maximizing alpha1 and alpha5 is optimal on both sides of the inequality.
inline std::optional<std::array<int, 5>> alpha_witness(int n, int p, int qq, int cap1, int cap5) {
  if (qq < 0 || p < n) return std::nullopt;
  int a1 = std::min(n, cap1), a2 = n - a1, a3 = p - n;
  int a5 = std::min(qq, cap5), a4 = qq - a5;
  if (a2 + a3 + a4 <= a5) return std::array<int, 5>{a1, a2, a3, a4, a5};
  return std::nullopt;
}

}  // namespace detail_rat

// Verify a claimed subclass, or search the four tags in order.  r is fixed
// per term by the order relation r = m - p - 2q.
inline SubclassReport subclass_check(const RationalHamiltonian& H,
                                     std::optional<SubclassTag> required = std::nullopt) {
  SubclassReport rep;
  if (H.terms.empty()) { rep.ok = true; rep.violation = "empty Hamiltonian"; return rep; }
  rep.r = H.terms.front().order();
  for (auto& t : H.terms)
    if (t.order() != rep.r) {
      rep.violation = "mixed orders across terms";
      return rep;
    }
  const int r = rep.r;

  auto try_tag = [&](SubclassTag tag) -> bool {
    std::vector<std::array<int, 5>> alphas;
    for (auto& t : H.terms) {
      int n = t.n(), p = t.p(), q = t.q();
      switch (tag) {
        case SubclassTag::r_omega:
          if (!(n == p && q == 0 && n <= 2 * r - 6)) return false;
          alphas.push_back({0, 0, 0, 0, 0});
          break;
        case SubclassTag::r_omega_star:
          if (!(n == p && q == 0 && n <= 2 * (r + 1) - 5)) return false;
          alphas.push_back({0, 0, 0, 0, 0});
          break;
        case SubclassTag::r_Omega: {
          auto w = detail_rat::alpha_witness(n, p, q, 2 * r - 6, r - 4);
          if (!w) return false;
          alphas.push_back(*w);
          break;
        }
        case SubclassTag::r_Omega_star: {
          auto w = detail_rat::alpha_witness(n, p, q - 1, 2 * (r + 2) - 6, (r + 2) - 4);
          if (!w) return false;
          alphas.push_back(*w);
          break;
        }
      }
    }
    rep.ok = true;
    rep.tag = tag;
    rep.alphas = std::move(alphas);
    return true;
  };

  if (required) {
    if (!try_tag(*required))
      rep.violation = std::string("no witness for ") + to_string(*required) + " at r = " + std::to_string(r);
    return rep;
  }
  for (auto tag : {SubclassTag::r_omega, SubclassTag::r_omega_star, SubclassTag::r_Omega,
                   SubclassTag::r_Omega_star})
    if (try_tag(tag)) return rep;
  rep.violation = "no subclass witness found at r = " + std::to_string(r);
  return rep;
}

// ---------------------------------------------------------------------------
// condition (vi)/(vii): distribution of the derivatives

struct DistributionCertificate {
  bool ok = true;
  // per term: iota maps the 2p divisor slots injectively into the mu-order
  // positions 3..2m of the numerator
  std::vector<std::vector<int>> iota;
  std::string failure;
};

inline DistributionCertificate distribute_derivatives_certificate(const RationalHamiltonian& H,
                                                                  double C) {
  DistributionCertificate cert;
  for (auto& t : H.terms) {
    const int m = t.m(), p = t.p();
    std::vector<double> demand;  // mu_min of each k divisor, twice
    for (auto& k : t.k_omega) { demand.push_back(k.mu_min()); demand.push_back(k.mu_min()); }
    for (auto& k : t.k_Omega) { demand.push_back(k.mu_min()); demand.push_back(k.mu_min()); }
    if (int(demand.size()) != 2 * p) throw std::logic_error("certificate: slot count");

    auto mus = t.pi.mu_sorted();
    const int targets = 2 * m - 2;  // positions 3..2m
    if (2 * p > targets) {
      cert.ok = false;
      cert.failure = "term " + t.pi.str() + ": more divisor slots than free positions";
      return cert;
    }
    // Kuhn's augmenting-path matching on the threshold bipartite graph
    std::vector<int> match_target(targets, -1);
    std::vector<int> match_slot(demand.size(), -1);
    for (std::size_t slot = 0; slot < demand.size(); ++slot) {
      std::vector<char> used(targets, 0);
      std::function<bool(int)> tryk = [&](int sl) -> bool {
        for (int pos = 0; pos < targets; ++pos) {
          if (used[pos]) continue;
          double mu_pos = gauge(mus[pos + 2].a);
          if (demand[sl] > C * mu_pos) continue;
          used[pos] = 1;
          if (match_target[pos] < 0 || tryk(match_target[pos])) {
            match_target[pos] = sl;
            match_slot[sl] = pos;
            return true;
          }
        }
        return false;
      };
      if (!tryk(int(slot))) {
        cert.ok = false;
        cert.failure = "term " + t.pi.str() + ": no injective derivative distribution";
        return cert;
      }
    }
    // condition (vii): eps^4 divisors are controlled by mu_2 of the numerator
    for (auto& h : t.h_Omega) {
      if (t.pi.size() < 4) { cert.ok = false; cert.failure = "numerator too short for (vii)"; return cert; }
      if (h.mu_min() > C * t.pi.mu(2)) {
        cert.ok = false;
        cert.failure = "term " + t.pi.str() + ": memory condition fails for h = " + h.str();
        return cert;
      }
    }
    std::vector<int> io(match_slot.begin(), match_slot.end());
    cert.iota.push_back(std::move(io));
  }
  return cert;
}

}  // namespace rnf
