// polynomial.hpp — homogeneous polynomial Hamiltonians with exact formal
// coefficients, and their Poisson bracket.
//
// P[c] = sum over ordered tuples j in M_m of c_j z_j with c_{conj j} =
// conj(c_j).  Storage is by canonical monomial (the sorted entry multiset)
// keeping the symmetric per-ordered-tuple coefficient c_j; the monomial's
// total coefficient is c_j * orderings(j).

#pragma once

#include "rnf/enumerate.hpp"
#include "rnf/exact.hpp"
#include "rnf/indices.hpp"
#include "rnf/model.hpp"
#include "rnf/poisson_numeric.hpp"
#include "rnf/state.hpp"

#include <unordered_map>
#include <vector>

namespace rnf {

class Poly {
 public:
  using Map = std::unordered_map<MultiIndex, Coeff, MultiIndexHash>;

 private:
  int m_ = 0;  // half-degree: monomials have 2m entries
  Map c_;      // symmetric coefficients

 public:
  Poly() = default;
  explicit Poly(int half_degree) : m_(half_degree) {}

  int half_degree() const { return m_; }
  const Map& coeffs() const { return c_; }
  bool empty() const { return c_.empty(); }
  std::size_t size() const { return c_.size(); }

  const Coeff* find(const MultiIndex& j) const {
    auto it = c_.find(j);
    return it == c_.end() ? nullptr : &it->second;
  }

  void add(const MultiIndex& j, const Coeff& v) {
    if (v.is_zero()) return;
    if (int(j.size()) != 2 * m_) throw std::invalid_argument("Poly::add: wrong monomial degree");
    auto [it, fresh] = c_.emplace(j, v);
    if (!fresh) {
      it->second += v;
      if (it->second.is_zero()) c_.erase(it);
    }
  }
  // add by total monomial coefficient
  void add_total(const MultiIndex& j, const Coeff& total) {
    add(j, total.scaled(Rat(1, orderings(j))));
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (a.m_ != b.m_) throw std::invalid_argument("Poly: degree mismatch in sum");
    Poly r = a;
    for (auto& [j, v] : b.c_) r.add(j, v);
    return r;
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    Poly nb = b;
    for (auto& [j, v] : nb.c_) v = -v;
    if (a.empty()) return nb;
    return a + nb;
  }
  Poly scaled(const Rat& s) const {
    Poly r(m_);
    for (auto& [j, v] : c_) r.c_.emplace(j, v.scaled(s));
    return r;
  }
  Poly times_coeff(const Coeff& s) const {
    Poly r(m_);
    for (auto& [j, v] : c_) r.add(j, v * s);
    return r;
  }

  // restrictions
  template <class Pred>
  Poly filter(Pred keep) const {
    Poly r(m_);
    for (auto& [j, v] : c_)
      if (keep(j)) r.c_.emplace(j, v);
    return r;
  }
  Poly resonant_part() const { return filter([](const MultiIndex& j) { return j.classify() == ClassTag::R; }); }
  Poly nonresonant_part() const { return filter([](const MultiIndex& j) { return j.classify() != ClassTag::R; }); }
  Poly action_part() const { return filter([](const MultiIndex& j) { return j.irreducible_part().empty(); }); }
  Poly irreducible_part() const {
    return filter([](const MultiIndex& j) { return j.classify() == ClassTag::R && j.is_irreducible(); });
  }

  bool reality_closed() const {
    for (auto& [j, v] : c_) {
      const Coeff* w = find(j.conjugate());
      if (!w || !(*w == v.conj())) return false;
    }
    return true;
  }

  double coeff_sup(const ModelParams& p) const {
    double s = 0;
    for (auto& [j, v] : c_) s = std::max(s, std::abs(v.eval(p.phi0, p.phi1, p.phi2)));
    return s;
  }

  Complex evaluate(const FourierState& z, const ModelParams& p) const {
    Complex acc{0, 0};
    for (auto& [j, v] : c_)
      acc += v.eval(p.phi0, p.phi1, p.phi2) * double(orderings(j)) * z.z_monomial(j);
    return acc;
  }

  void add_gradient(const FourierState& z, const ModelParams& p, Gradient& g, Complex scale = {1, 0}) const {
    const int K = z.window();
    for (auto& [j, v] : c_) {
      Complex C = scale * v.eval(p.phi0, p.phi1, p.phi2) * double(orderings(j));
      const auto& e = j.entries();
      // d z_j / d z_(delta,a): multiplicity * monomial without one occurrence
      std::size_t i = 0;
      while (i < e.size()) {
        std::size_t k = i;
        while (k < e.size() && e[k] == e[i]) ++k;
        if (e[i].a >= -K && e[i].a <= K) {
          Complex rest{1, 0};
          for (std::size_t t = 0; t < e.size(); ++t)
            if (t != i) rest *= z.z(e[t]);
          Complex val = C * double(k - i) * rest;
          if (e[i].delta > 0) g.dxi[e[i].a + K] += val;
          else g.deta[e[i].a + K] += val;
        }
        i = k;
      }
    }
  }
};

// {A, B} = i sum_a (dA/dxi_a dB/deta_a - dA/deta_a dB/dxi_a), exact.
// With restrict_window >= 0 only output monomials supported in that window
// are kept (used with extended operand sets to compute boundary-exact
// brackets: channels through modes up to 3K contribute to small outputs).
inline Poly poisson_poly(const Poly& A, const Poly& B, int restrict_window = -1) {
  struct Occ { const MultiIndex* j; Coeff total; int plus, minus; };
  auto occurrences = [](const Poly& P) {
    std::unordered_map<int, std::vector<Occ>> by_mode;
    for (auto& [j, v] : P.coeffs()) {
      Coeff total = v.scaled(Rat(orderings(j)));
      const auto& e = j.entries();
      std::size_t i = 0;
      while (i < e.size()) {
        std::size_t k = i;
        int plus = 0, minus = 0;
        while (k < e.size() && e[k].a == e[i].a) { (e[k].delta > 0 ? plus : minus)++; ++k; }
        by_mode[e[i].a].push_back({&j, total, plus, minus});
        i = k;
      }
    }
    return by_mode;
  };

  auto remove_one = [](const MultiIndex& j, ModeIndex what) {
    std::vector<ModeIndex> v = j.entries();
    for (auto it = v.begin(); it != v.end(); ++it)
      if (*it == what) { v.erase(it); break; }
    return v;
  };

  auto in_window = [restrict_window](const std::vector<ModeIndex>& v) {
    if (restrict_window < 0) return true;
    for (auto& j : v)
      if (j.a < -restrict_window || j.a > restrict_window) return false;
    return true;
  };

  Poly out(A.half_degree() + B.half_degree() - 1);
  auto occA = occurrences(A), occB = occurrences(B);
  for (auto& [a, listA] : occA) {
    auto itB = occB.find(a);
    if (itB == occB.end()) continue;
    for (auto& oa : listA)
      for (auto& ob : itB->second) {
        // + channel: dA/dxi_a * dB/deta_a
        if (oa.plus > 0 && ob.minus > 0) {
          auto v = remove_one(*oa.j, {+1, a});
          auto w = remove_one(*ob.j, {-1, a});
          v.insert(v.end(), w.begin(), w.end());
          if (in_window(v)) {
            Coeff t = (oa.total * ob.total).scaled(Rat(std::int64_t(oa.plus) * ob.minus)).times_i(1);
            out.add_total(MultiIndex(std::move(v)), t);
          }
        }
        // - channel: dA/deta_a * dB/dxi_a
        if (oa.minus > 0 && ob.plus > 0) {
          auto v = remove_one(*oa.j, {-1, a});
          auto w = remove_one(*ob.j, {+1, a});
          v.insert(v.end(), w.begin(), w.end());
          if (in_window(v)) {
            Coeff t = (oa.total * ob.total).scaled(Rat(-std::int64_t(oa.minus) * ob.plus)).times_i(1);
            out.add_total(MultiIndex(std::move(v)), t);
          }
        }
      }
  }
  return out;
}

// M_2 monomials with at most one entry outside [-K, K] (entries up to 3K).
// Together with output restriction to [-K, K] this makes quartic brackets
// boundary-exact: any small output monomial has parents with at least three
// small entries.
namespace detail_poly {
template <class F>
void for_each_extended_quartet(int K, F&& f) {
  for (auto& j : enumerate_class(2, K, ClassTag::M)) f(j);
  // exactly one entry outside the window; momentum forces |big| <= 3K
  for (int a2 = -K; a2 <= K; ++a2)
    for (int b1 = -K; b1 <= K; ++b1)
      for (int b2 = b1; b2 <= K; ++b2) {
        int A = b1 + b2 - a2;  // big entry on the plus side
        if (A >= -K && A <= K) continue;
        f(make_tuple({{1, A}, {1, a2}, {-1, b1}, {-1, b2}}));
      }
  for (int a1 = -K; a1 <= K; ++a1)
    for (int a2 = a1; a2 <= K; ++a2)
      for (int b1 = -K; b1 <= K; ++b1) {
        int B = a1 + a2 - b1;  // big entry on the minus side
        if (B >= -K && B <= K) continue;
        f(make_tuple({{1, a1}, {1, a2}, {-1, b1}, {-1, B}}));
      }
}
}  // namespace detail_poly

inline Poly q4_poly_extended(int K) {
  Poly P(2);
  Coeff c = Coeff::gen(0, 1, 0, Rat(1, 12));
  detail_poly::for_each_extended_quartet(K, [&](const MultiIndex& j) {
    if (j.classify() != ClassTag::R) P.add(j, c);
  });
  return P;
}
inline Poly chi4_extended(int K) {
  Poly P(2);
  detail_poly::for_each_extended_quartet(K, [&](const MultiIndex& j) {
    if (j.classify() == ClassTag::R) return;
    P.add(j, Coeff::imaginary(Rat(-1, 12) / Rat(j.laplacian()), {0, 1, 0}));
  });
  return P;
}
inline Poly p4_poly_extended(int K) {
  Poly P(2);
  Coeff c = Coeff::gen(0, 1, 0, Rat(1, 12));
  detail_poly::for_each_extended_quartet(K, [&](const MultiIndex& j) { P.add(j, c); });
  return P;
}

// ---------------------------------------------------------------------------
// the concrete Hamiltonian pieces

// P_{2m}: symmetric coefficient m! phi^{(m-1)}(0) / (2m)! on every canonical
// j in M_m with entries inside the window.
inline Poly p2m_coefficients(int m, int K) {
  Poly P(m);
  std::int64_t fact_m = 1, fact_2m = 1;
  for (int i = 2; i <= m; ++i) fact_m *= i;
  for (int i = 2; i <= 2 * m; ++i) fact_2m *= i;
  Rat scale(fact_m, fact_2m);
  GenPow gen = m == 1 ? GenPow{1, 0, 0} : (m == 2 ? GenPow{0, 1, 0} : GenPow{0, 0, 1});
  if (m > 3) throw std::invalid_argument("p2m_coefficients: exact generators stop at m = 3");
  Coeff c = Coeff::gen(gen.e0, gen.e1, gen.e2, scale);
  for (auto& j : enumerate_class(m, K, ClassTag::M)) P.add(j, c);
  return P;
}

// Z2 = sum (a^2 + phi(0)) I_a
inline Poly z2_poly(int K) {
  Poly P(1);
  for (int a = -K; a <= K; ++a) {
    Coeff c = Coeff(Rat(std::int64_t(a) * a, 2)) + Coeff::gen(1, 0, 0, Rat(1, 2));
    P.add(action_pair(a), c);
  }
  return P;
}

// Z4 = (phi'(0)/12) sum over R_2; Q4 = same coefficient over M_2 \ R_2;
// chi4 = (phi'(0)/12) sum over M_2 \ R_2 of z_j / (i Delta_j).
inline Poly z4_poly(int K) {
  Poly P(2);
  Coeff c = Coeff::gen(0, 1, 0, Rat(1, 12));
  for (auto& j : enumerate_class(2, K, ClassTag::R)) P.add(j, c);
  return P;
}
inline Poly q4_poly(int K) {
  Poly P(2);
  Coeff c = Coeff::gen(0, 1, 0, Rat(1, 12));
  for (auto& j : enumerate_class(2, K, ClassTag::M))
    if (j.classify() != ClassTag::R) P.add(j, c);
  return P;
}
inline Poly chi4(int K) {
  Poly P(2);
  for (auto& j : enumerate_class(2, K, ClassTag::M)) {
    if (j.classify() == ClassTag::R) continue;
    // 1/(i Delta) = -i/Delta
    P.add(j, Coeff::imaginary(Rat(-1, 12) / Rat(j.laplacian()), {0, 1, 0}));
  }
  return P;
}

// Z6 of the closed form, as an action polynomial over the window.
inline Poly z6_poly(int K) {
  Poly P(3);
  auto action_triple = [](int a, int b, int c) {
    std::vector<ModeIndex> v = {{+1, a}, {-1, a}, {+1, b}, {-1, b}, {+1, c}, {-1, c}};
    return MultiIndex(std::move(v));
  };
  for (int a = -K; a <= K; ++a) {
    // I_a^3: phi''/6
    P.add_total(action_triple(a, a, a), Coeff::gen(0, 0, 1, Rat(1, 6)));
    for (int b = -K; b <= K; ++b) {
      if (b == a) continue;
      // I_a^2 I_b: -phi'^2/(2(a-b)^2) + (3/2) phi''
      Coeff c = Coeff::gen(0, 2, 0, Rat(-1, 2) * Rat(1, std::int64_t(a - b) * (a - b))) +
                Coeff::gen(0, 0, 1, Rat(3, 2));
      P.add_total(action_triple(a, a, b), c);
    }
  }
  // I_a I_b I_c with a < b < c: 6 phi''
  for (int a = -K; a <= K; ++a)
    for (int b = a + 1; b <= K; ++b)
      for (int c = b + 1; c <= K; ++c)
        P.add_total(action_triple(a, b, c), Coeff::gen(0, 0, 1, Rat(6)));
  return P;
}

// functional adapter
class PolyFunctional : public Functional {
  const Poly* P_;
  ModelParams p_;

 public:
  PolyFunctional(const Poly& P, const ModelParams& p) : P_(&P), p_(p) {}
  Complex value(const FourierState& z) const override { return P_->evaluate(z, p_); }
  bool gradient(const FourierState& z, Gradient& g) const override {
    g = Gradient(z.window());
    P_->add_gradient(z, p_, g);
    return true;
  }
};

}  // namespace rnf
