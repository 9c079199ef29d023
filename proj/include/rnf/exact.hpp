// exact.hpp — arbitrary-precision rationals and formal coefficients.
//
// Coefficients of the normal-form algebra live in Q(i)[phi0, phi1, phi2]
// where phi0, phi1, phi2 are the formal generators phi(0), phi'(0), phi''(0).
// Numeric binding happens only at evaluation time.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace rnf {

using BigInt = boost::multiprecision::cpp_int;

// Reduced fraction over cpp_int. Denominator kept positive.
class Rat {
  BigInt num_{0}, den_{1};

  void normalize() {
    if (den_ == 0) throw std::domain_error("Rat: zero denominator");
    if (den_ < 0) { num_ = -num_; den_ = -den_; }
    BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
    if (g > 1) { num_ /= g; den_ /= g; }
  }

 public:
  Rat() = default;
  Rat(long long n) : num_(n) {}
  Rat(BigInt n) : num_(std::move(n)) {}
  Rat(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }
  Rat(long long n, long long d) : num_(n), den_(d) { normalize(); }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1); }

  friend Rat operator+(const Rat& a, const Rat& b) { return Rat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_); }
  friend Rat operator-(const Rat& a, const Rat& b) { return Rat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_); }
  friend Rat operator*(const Rat& a, const Rat& b) { return Rat(a.num_ * b.num_, a.den_ * b.den_); }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::domain_error("Rat: division by zero");
    return Rat(a.num_ * b.den_, a.den_ * b.num_);
  }
  Rat operator-() const { Rat r(*this); r.num_ = -r.num_; return r; }
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    BigInt l = a.num_ * b.den_, r = b.num_ * a.den_;
    return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  Rat abs() const { return num_ < 0 ? -*this : *this; }

  double to_double() const {
    // exact for everything the tests print; good to ~1e-15 otherwise
    return static_cast<double>(boost::multiprecision::cpp_rational(num_) /
                               boost::multiprecision::cpp_rational(den_));
  }

  // log|x| computed safely even when numerator/denominator overflow double
  double log_abs() const {
    if (num_ == 0) throw std::domain_error("Rat::log_abs of zero");
    auto log_big = [](const BigInt& x) {
      BigInt y = x < 0 ? BigInt(-x) : x;
      unsigned bits = boost::multiprecision::msb(y);
      if (bits <= 900) return std::log(y.convert_to<double>());
      BigInt top = y >> (bits - 52);
      return std::log(top.convert_to<double>()) + double(bits - 52) * std::log(2.0);
    };
    return log_big(num_) - log_big(den_);
  }

  std::string str() const {
    std::string s = num_.str();
    if (den_ != 1) s += "/" + den_.str();
    return s;
  }
};

inline Rat pow(Rat base, unsigned e) {
  Rat r(1);
  while (e) { if (e & 1) r *= base; base *= base; e >>= 1; }
  return r;
}

// Gaussian rational a + i b.
struct GaussRat {
  Rat re, im;
  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  friend GaussRat operator+(const GaussRat& a, const GaussRat& b) { return {a.re + b.re, a.im + b.im}; }
  friend GaussRat operator-(const GaussRat& a, const GaussRat& b) { return {a.re - b.re, a.im - b.im}; }
  friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussRat operator-() const { return {-re, -im}; }
  GaussRat conj() const { return {re, -im}; }
  friend bool operator==(const GaussRat& a, const GaussRat& b) { return a.re == b.re && a.im == b.im; }
  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
};

// Multiply by i^k, k mod 4.
inline GaussRat mul_i_pow(const GaussRat& g, int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return g;
    case 1: return {-g.im, g.re};
    case 2: return -g;
    default: return {g.im, -g.re};
  }
}

// Exponent triple for the generators (phi(0), phi'(0), phi''(0)).
struct GenPow {
  int e0 = 0, e1 = 0, e2 = 0;
  friend auto operator<=>(const GenPow&, const GenPow&) = default;
};

// Element of Q(i)[phi0, phi1, phi2], sparse in the generator exponents.
class Coeff {
  std::map<GenPow, GaussRat> t_;

  void add_term(const GenPow& g, const GaussRat& v) {
    if (v.is_zero()) return;
    auto [it, fresh] = t_.emplace(g, v);
    if (!fresh) {
      it->second = it->second + v;
      if (it->second.is_zero()) t_.erase(it);
    }
  }

 public:
  Coeff() = default;
  Coeff(Rat r) { add_term({}, {std::move(r), Rat(0)}); }
  static Coeff gauss(GaussRat g, GenPow p = {}) { Coeff c; c.add_term(p, g); return c; }
  static Coeff gen(int e0, int e1, int e2, Rat scale = Rat(1)) {
    Coeff c; c.add_term({e0, e1, e2}, {std::move(scale), Rat(0)}); return c;
  }
  static Coeff imaginary(Rat scale, GenPow p = {}) { Coeff c; c.add_term(p, {Rat(0), std::move(scale)}); return c; }

  bool is_zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }
  const std::map<GenPow, GaussRat>& terms() const { return t_; }

  friend Coeff operator+(const Coeff& a, const Coeff& b) {
    Coeff r = a;
    for (auto& [g, v] : b.t_) r.add_term(g, v);
    return r;
  }
  friend Coeff operator-(const Coeff& a, const Coeff& b) {
    Coeff r = a;
    for (auto& [g, v] : b.t_) r.add_term(g, -v);
    return r;
  }
  friend Coeff operator*(const Coeff& a, const Coeff& b) {
    Coeff r;
    for (auto& [ga, va] : a.t_)
      for (auto& [gb, vb] : b.t_)
        r.add_term({ga.e0 + gb.e0, ga.e1 + gb.e1, ga.e2 + gb.e2}, va * vb);
    return r;
  }
  Coeff operator-() const { Coeff r; for (auto& [g, v] : t_) r.t_.emplace(g, -v); return r; }
  Coeff& operator+=(const Coeff& o) { return *this = *this + o; }
  Coeff& operator-=(const Coeff& o) { return *this = *this - o; }
  Coeff& operator*=(const Coeff& o) { return *this = *this * o; }

  Coeff scaled(const Rat& s) const {
    if (s.is_zero()) return {};
    Coeff r;
    for (auto& [g, v] : t_) r.t_.emplace(g, GaussRat{v.re * s, v.im * s});
    return r;
  }
  Coeff times_i(int k = 1) const {
    Coeff r;
    for (auto& [g, v] : t_) r.t_.emplace(g, mul_i_pow(v, k));
    return r;
  }
  Coeff conj() const { Coeff r; for (auto& [g, v] : t_) r.t_.emplace(g, v.conj()); return r; }

  friend bool operator==(const Coeff& a, const Coeff& b) { return a.t_ == b.t_; }

  std::complex<double> eval(double phi0, double phi1, double phi2) const {
    std::complex<double> acc{0.0, 0.0};
    for (auto& [g, v] : t_)
      acc += v.to_complex() * std::pow(phi0, g.e0) * std::pow(phi1, g.e1) * std::pow(phi2, g.e2);
    return acc;
  }

  std::string str() const {
    if (t_.empty()) return "0";
    std::string s;
    for (auto& [g, v] : t_) {
      if (!s.empty()) s += " + ";
      s += "(" + v.re.str() + (v.im.is_zero() ? "" : (" + i*" + v.im.str())) + ")";
      if (g.e0) s += "*phi0^" + std::to_string(g.e0);
      if (g.e1) s += "*phi1^" + std::to_string(g.e1);
      if (g.e2) s += "*phi2^" + std::to_string(g.e2);
    }
    return s;
  }
};

}  // namespace rnf
