// state.hpp — truncated phase-space states and actions.

#pragma once

#include "rnf/indices.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace rnf {

using Complex = std::complex<double>;

class ActionField {
  int K_ = 0;
  std::vector<double> v_;  // index a + K

 public:
  ActionField() = default;
  explicit ActionField(int K) : K_(K), v_(2 * K + 1, 0.0) {}

  int window() const { return K_; }
  double operator[](int a) const { return (a < -K_ || a > K_) ? 0.0 : v_[a + K_]; }
  double& at(int a) {
    if (a < -K_ || a > K_) throw std::out_of_range("ActionField: mode outside window");
    return v_[a + K_];
  }

  // weighted sup-norm sup_a <a>^{2s} I_a
  double sup_norm(double s) const {
    double m = 0.0;
    for (int a = -K_; a <= K_; ++a) m = std::max(m, std::pow(gauge_sq(a), s) * std::abs((*this)[a]));
    return m;
  }
  double sum() const { double t = 0; for (double x : v_) t += x; return t; }
  double sum_sq() const { double t = 0; for (double x : v_) t += x * x; return t; }

  ActionField scaled(double c) const {
    ActionField r = *this;
    for (double& x : r.v_) x *= c;
    return r;
  }
};

class FourierState {
  int K_ = 0;
  bool reality_ = true;
  std::vector<Complex> xi_, eta_;  // index a + K

 public:
  FourierState() = default;
  explicit FourierState(int K, bool reality = true)
      : K_(K), reality_(reality), xi_(2 * K + 1), eta_(2 * K + 1) {}

  int window() const { return K_; }
  bool reality_flag() const { return reality_; }
  void set_reality_flag(bool r) { reality_ = r; }

  Complex xi(int a) const { return (a < -K_ || a > K_) ? Complex{} : xi_[a + K_]; }
  Complex eta(int a) const { return (a < -K_ || a > K_) ? Complex{} : eta_[a + K_]; }
  Complex& xi_at(int a) { return xi_.at(a + K_); }
  Complex& eta_at(int a) { return eta_.at(a + K_); }

  // set xi_a and keep eta_a = conj(xi_a)
  void set_mode(int a, Complex v) { xi_.at(a + K_) = v; eta_.at(a + K_) = std::conj(v); }

  Complex z(const ModeIndex& j) const { return j.delta > 0 ? xi(j.a) : eta(j.a); }
  Complex z_monomial(const MultiIndex& m) const {
    Complex p{1.0, 0.0};
    for (auto& j : m.entries()) p *= z(j);
    return p;
  }

  // || z ||_s = sum <a>^s (|xi_a| + |eta_a|)
  double norm_s(double s) const {
    double t = 0;
    for (int a = -K_; a <= K_; ++a)
      t += std::pow(gauge_sq(a), s / 2) * (std::abs(xi(a)) + std::abs(eta(a)));
    return t;
  }
  // u-side only: sum <a>^s |xi_a|
  double u_norm_s(double s) const {
    double t = 0;
    for (int a = -K_; a <= K_; ++a) t += std::pow(gauge_sq(a), s / 2) * std::abs(xi(a));
    return t;
  }

  double reality_defect() const {
    double m = 0;
    for (int a = -K_; a <= K_; ++a) m = std::max(m, std::abs(eta(a) - std::conj(xi(a))));
    return m;
  }

  FourierState scaled(double c) const {
    FourierState r = *this;
    for (auto& v : r.xi_) v *= c;
    for (auto& v : r.eta_) v *= c;
    return r;
  }

  FourierState rotated(const std::vector<double>& theta) const {
    if (int(theta.size()) != 2 * K_ + 1) throw std::invalid_argument("rotated: phase vector size");
    FourierState r = *this;
    for (int a = -K_; a <= K_; ++a) {
      Complex ph = std::polar(1.0, theta[a + K_]);
      r.xi_[a + K_] *= ph;
      r.eta_[a + K_] *= std::conj(ph);
    }
    return r;
  }

  friend FourierState operator-(const FourierState& x, const FourierState& y) {
    if (x.K_ != y.K_) throw std::invalid_argument("state difference: window mismatch");
    FourierState r = x;
    for (std::size_t i = 0; i < r.xi_.size(); ++i) { r.xi_[i] -= y.xi_[i]; r.eta_[i] -= y.eta_[i]; }
    r.reality_ = x.reality_ && y.reality_;
    return r;
  }
};

// I_a = xi_a eta_a; for reality-flagged states the product must be real up
// to `tol` or the state is rejected.
inline ActionField actions_of(const FourierState& z, double tol = 1e-9) {
  ActionField I(z.window());
  for (int a = -z.window(); a <= z.window(); ++a) {
    Complex p = z.xi(a) * z.eta(a);
    if (z.reality_flag() && std::abs(p.imag()) > tol * std::max(1.0, std::abs(p.real())))
      throw std::domain_error("actions_of: non-real action on a reality-flagged state");
    I.at(a) = p.real();
  }
  return I;
}

// convolution product of the associated functions u*v (used by the norm
// algebra property tests)
inline std::vector<Complex> u_convolve(const FourierState& x, const FourierState& y) {
  int K = x.window(), L = y.window();
  std::vector<Complex> out(2 * (K + L) + 1);
  for (int a = -K; a <= K; ++a)
    for (int b = -L; b <= L; ++b) out[a + b + K + L] += x.xi(a) * y.xi(b);
  return out;
}

}  // namespace rnf
