// frequencies.hpp — the integrable Hamiltonians Z2, Z4, Z6 and the small
// denominators omega, Omega, Omega-tilde (and the NLSP variant), with
// analytic first and second derivatives in the actions.
//
// Everything is templated on the scalar so the identical formulas run in
// double (hot paths) and in exact rationals (oracle tests).  Sums over
// b in Z are truncated to the tail window; actions vanish outside the state
// window so the truncation is exact for window-supported states.

#pragma once

#include "rnf/exact.hpp"
#include "rnf/indices.hpp"
#include "rnf/model.hpp"
#include "rnf/state.hpp"

#include <stdexcept>
#include <vector>

namespace rnf {

template <class S>
struct Actions {
  int K = 0;
  std::vector<S> v;  // index a + K

  Actions() = default;
  explicit Actions(int window) : K(window), v(2 * window + 1, S(0)) {}
  S operator[](int a) const { return (a < -K || a > K) ? S(0) : v[a + K]; }
  S& at(int a) { return v.at(a + K); }
  int window() const { return K; }
};

using RatActions = Actions<Rat>;

inline Actions<double> as_generic(const ActionField& I) {
  Actions<double> r(I.window());
  for (int a = -I.window(); a <= I.window(); ++a) r.at(a) = I[a];
  return r;
}

// I_a = xi_a eta_a without any reality projection: the rational functionals
// are holomorphic in the coordinates jointly, so off the real slice the
// denominators take complex action arguments.
inline Actions<Complex> complex_actions_of(const FourierState& z) {
  Actions<Complex> I(z.window());
  for (int a = -z.window(); a <= z.window(); ++a) I.at(a) = z.xi(a) * z.eta(a);
  return I;
}

template <class S>
struct FreqParams {
  S phi0{0}, phi1{1}, phi2{0};
  Model model = Model::NLS;
  int tail = 0;  // window for b-sums

  static FreqParams<double> from(const ModelParams& p, int state_window) {
    return {p.phi0, p.phi1, p.phi2, p.model, p.tail(state_window)};
  }
};

namespace detail {
template <class S> inline S inv_sq(int d) { return S(1) / S(std::int64_t(d) * d); }
template <> inline double inv_sq<double>(int d) { return 1.0 / (double(d) * d); }
template <> inline Rat inv_sq<Rat>(int d) { return Rat(1, std::int64_t(d) * d); }
template <> inline Complex inv_sq<Complex>(int d) { return {1.0 / (double(d) * d), 0.0}; }
template <class S> inline S abs_of(const S& x) { return x < S(0) ? -x : x; }
inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const Rat& x) { return x.is_zero(); }
inline bool is_zero(const Complex& x) { return x == Complex{0.0, 0.0}; }
}  // namespace detail

// ---------------------------------------------------------------------------
// values

template <class S>
S z2_value(const Actions<S>& I, const FreqParams<S>& p) {
  S acc(0);
  for (int a = -I.K; a <= I.K; ++a) acc += (S(std::int64_t(a) * a) + p.phi0) * I[a];
  return acc;
}

template <class S>
S z4_value(const Actions<S>& I, const FreqParams<S>& p) {
  if (p.model == Model::NLSP) {
    S acc(0);
    for (int a = -I.K; a <= I.K; ++a)
      for (int b = -I.K; b <= I.K; ++b)
        if (a != b) acc += I[a] * I[b] * detail::inv_sq<S>(a - b);
    return p.phi1 * acc;
  }
  S s1(0), s2(0);
  for (int a = -I.K; a <= I.K; ++a) { s1 += I[a]; s2 += I[a] * I[a]; }
  return p.phi1 * s1 * s1 - p.phi1 * s2 / S(2);
}

template <class S>
S z6_value(const Actions<S>& I, const FreqParams<S>& p) {
  S s1(0), s2(0), s3(0), conv(0);
  for (int a = -I.K; a <= I.K; ++a) {
    s1 += I[a];
    s2 += I[a] * I[a];
    s3 += I[a] * I[a] * I[a];
    if (!detail::is_zero(I[a]))
      for (int b = -I.K; b <= I.K; ++b)
        if (b != a && !detail::is_zero(I[b])) conv += I[a] * I[a] * I[b] * detail::inv_sq<S>(a - b);
  }
  return -p.phi1 * p.phi1 * conv / S(2) +
         p.phi2 * (S(6) * s1 * s1 * s1 - S(9) * s2 * s1 + S(4) * s3) / S(6);
}

// ---------------------------------------------------------------------------
// first derivatives

template <class S>
S dz4(const Actions<S>& I, const FreqParams<S>& p, int c) {
  if (p.model == Model::NLSP) {
    S acc(0);
    for (int b = -p.tail; b <= p.tail; ++b)
      if (b != c && !detail::is_zero(I[b])) acc += I[b] * detail::inv_sq<S>(c - b);
    return S(2) * p.phi1 * acc;
  }
  S s1(0);
  for (int a = -I.K; a <= I.K; ++a) s1 += I[a];
  return S(2) * p.phi1 * s1 - p.phi1 * I[c];
}

template <class S>
S dz6(const Actions<S>& I, const FreqParams<S>& p, int c) {
  S t1(0), t2(0), s1(0), s2(0);
  for (int a = -I.K; a <= I.K; ++a) {
    s1 += I[a];
    s2 += I[a] * I[a];
    if (a != c && !detail::is_zero(I[a])) {
      t1 += I[a] * detail::inv_sq<S>(c - a);            // sum_b I_b /(c-b)^2
      t2 += I[a] * I[a] * detail::inv_sq<S>(a - c);     // sum_a I_a^2/(a-c)^2
    }
  }
  S quad = -p.phi1 * p.phi1 * (S(2) * I[c] * t1 + t2) / S(2);
  S cub = p.phi2 * (S(18) * s1 * s1 - S(18) * I[c] * s1 - S(9) * s2 + S(12) * I[c] * I[c]) / S(6);
  return quad + cub;
}

// second derivative of Z6, needed by the rational vector fields and brackets
template <class S>
S d2z6(const Actions<S>& I, const FreqParams<S>& p, int c, int d) {
  S s1(0);
  for (int a = -I.K; a <= I.K; ++a) s1 += I[a];
  if (c != d)
    return -p.phi1 * p.phi1 * (I[c] + I[d]) * detail::inv_sq<S>(c - d) +
           p.phi2 * (S(6) * s1 - S(3) * I[c] - S(3) * I[d]);
  S conv(0);
  for (int b = -I.K; b <= I.K; ++b)
    if (b != c && !detail::is_zero(I[b])) conv += I[b] * detail::inv_sq<S>(c - b);
  return -p.phi1 * p.phi1 * conv + p.phi2 * (S(3) * s1 - S(2) * I[c]);
}

// coefficient of I_q in d2z6(.,., c, d) — an affine function of the actions
template <class S>
S d2z6_coeff(const FreqParams<S>& p, int c, int d, int q) {
  if (c != d) {
    S r = p.phi2 * S(6 - 3 * (q == c ? 1 : 0) - 3 * (q == d ? 1 : 0));
    if (q == c || q == d)
      r += -p.phi1 * p.phi1 * detail::inv_sq<S>(c - d) * S((q == c ? 1 : 0) + (q == d ? 1 : 0));
    return r;
  }
  S r = p.phi2 * S(3 - 2 * (q == c ? 1 : 0));
  if (q != c) r += -p.phi1 * p.phi1 * detail::inv_sq<S>(c - q);
  return r;
}

// ---------------------------------------------------------------------------
// small denominators

// omega_j(I) = sum_alpha delta_alpha dZ4/dI_{a_alpha}; via the derivative
// route it is defined for any tuple, and equals the closed form
// -phi'(0) sum delta_alpha I_{a_alpha} on zero-delta tuples (NLS).
template <class S>
S omega_derivative_route(const MultiIndex& k, const Actions<S>& I, const FreqParams<S>& p) {
  S acc(0);
  for (auto& j : k.entries()) acc += S(j.delta) * dz4(I, p, j.a);
  return acc;
}

template <class S>
S omega(const MultiIndex& k, const Actions<S>& I, const FreqParams<S>& p) {
  if (p.model == Model::NLSP) return omega_derivative_route(k, I, p);
  if (k.delta_sum() != 0)
    throw std::invalid_argument("omega: closed form needs a zero-delta tuple");
  S acc(0);
  for (auto& j : k.entries()) acc += S(j.delta) * I[j.a];
  return -p.phi1 * acc;
}

template <class S>
S omega_big(const MultiIndex& k, const Actions<S>& I, const FreqParams<S>& p) {
  S acc = omega(k, I, p);
  for (auto& j : k.entries()) acc += S(j.delta) * dz6(I, p, j.a);
  return acc;
}

// Omega-tilde: the omega part plus the pure-tail quadratic correction
//   -(1/2) phi'(0)^2 sum_alpha delta_alpha sum_{b not an entry} I_b^2/(a_alpha-b)^2
template <class S>
S omega_tilde(const MultiIndex& k, const Actions<S>& I, const FreqParams<S>& p) {
  S acc = omega(k, I, p);
  S corr(0);
  for (int b = -p.tail; b <= p.tail; ++b) {
    if (detail::is_zero(I[b])) continue;
    bool excluded = false;
    for (auto& j : k.entries())
      if (j.a == b) { excluded = true; break; }
    if (excluded) continue;
    S w(0);
    for (auto& j : k.entries()) w += S(j.delta) * detail::inv_sq<S>(j.a - b);
    corr += I[b] * I[b] * w;
  }
  return acc - p.phi1 * p.phi1 * corr / S(2);
}

// NLSP small denominator: 2 phi'(0) sum_alpha delta_alpha sum_{b != a_alpha} I_b/(a_alpha-b)^2
template <class S>
S omega_nlsp(const MultiIndex& k, const Actions<S>& I, const FreqParams<S>& p) {
  S acc(0);
  for (auto& j : k.entries()) {
    S inner(0);
    for (int b = -p.tail; b <= p.tail; ++b)
      if (b != j.a && !detail::is_zero(I[b])) inner += I[b] * detail::inv_sq<S>(j.a - b);
    acc += S(j.delta) * inner;
  }
  return S(2) * p.phi1 * acc;
}

// double-precision front ends on ActionField
inline double omega(const MultiIndex& k, const ActionField& I, const ModelParams& p) {
  auto fp = FreqParams<double>::from(p, I.window());
  auto g = as_generic(I);
  return p.model == Model::NLSP ? omega_nlsp(k, g, fp) : omega<double>(k, g, fp);
}
inline double omega_big(const MultiIndex& k, const ActionField& I, const ModelParams& p) {
  auto fp = FreqParams<double>::from(p, I.window());
  auto g = as_generic(I);
  return p.model == Model::NLSP ? omega_nlsp(k, g, fp) : omega_big<double>(k, g, fp);
}
inline double omega_tilde(const MultiIndex& k, const ActionField& I, const ModelParams& p) {
  auto fp = FreqParams<double>::from(p, I.window());
  auto g = as_generic(I);
  return omega_tilde<double>(k, g, fp);
}

}  // namespace rnf
