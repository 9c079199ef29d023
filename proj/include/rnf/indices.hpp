// indices.hpp — signed Fourier multi-indices and their resonance combinatorics.
//
// An index j = (delta, a) with delta in {+1,-1} addresses the coordinate
// xi_a (delta = +1) or eta_a (delta = -1).  Tuples of even length carry the
// zero-momentum hierarchy
//     Z_m : sum delta = 0
//     M_m : additionally sum delta*a = 0
//     R_m : additionally sum delta*a^2 = 0,
// and Irr(j) is j with all conjugate (action) pairs removed.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rnf {

struct ModeIndex {
  int delta;  // +1 or -1
  int a;      // wavenumber

  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
  // canonical storage order: by (a, delta)
  friend bool operator<(const ModeIndex& x, const ModeIndex& y) {
    if (x.a != y.a) return x.a < y.a;
    return x.delta < y.delta;
  }
};

inline ModeIndex conj(const ModeIndex& j) { return {-j.delta, j.a}; }
inline double gauge(int a) { return std::sqrt(1.0 + double(a) * double(a)); }
inline std::int64_t gauge_sq(int a) { return 1 + std::int64_t(a) * a; }

enum class ClassTag { none, Z, M, R };

inline const char* to_string(ClassTag t) {
  switch (t) {
    case ClassTag::Z: return "Z";
    case ClassTag::M: return "M";
    case ClassTag::R: return "R";
    default: return "none";
  }
}

class MultiIndex {
  std::vector<ModeIndex> e_;       // sorted by (a, delta)
  std::int64_t momentum_ = 0;      // sum delta*a
  std::int64_t laplacian_ = 0;     // sum delta*a^2
  int delta_sum_ = 0;

  void finish() {
    std::sort(e_.begin(), e_.end());
    momentum_ = laplacian_ = 0;
    delta_sum_ = 0;
    for (auto& j : e_) {
      delta_sum_ += j.delta;
      momentum_ += std::int64_t(j.delta) * j.a;
      laplacian_ += std::int64_t(j.delta) * j.a * j.a;
    }
  }

 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<ModeIndex> entries) : e_(std::move(entries)) { finish(); }

  const std::vector<ModeIndex>& entries() const { return e_; }
  std::size_t size() const { return e_.size(); }  // 2m for an order-m tuple
  bool empty() const { return e_.empty(); }
  std::int64_t momentum() const { return momentum_; }
  std::int64_t laplacian() const { return laplacian_; }  // Delta_j
  int delta_sum() const { return delta_sum_; }

  MultiIndex conjugate() const {
    std::vector<ModeIndex> v = e_;
    for (auto& j : v) j.delta = -j.delta;
    return MultiIndex(std::move(v));
  }

  ClassTag classify() const {
    if (size() % 2 != 0) throw std::invalid_argument("classify: odd-length multi-index");
    if (delta_sum_ != 0) return ClassTag::none;
    if (momentum_ != 0) return ClassTag::Z;
    if (laplacian_ != 0) return ClassTag::M;
    return ClassTag::R;
  }

  // Maximal removal of conjugate pairs (+1,a),(-1,a).  Idempotent.
  MultiIndex irreducible_part() const {
    std::vector<ModeIndex> out;
    std::size_t i = 0;
    while (i < e_.size()) {
      std::size_t j = i;
      while (j < e_.size() && e_[j].a == e_[i].a) ++j;
      int minus = 0, plus = 0;
      for (std::size_t k = i; k < j; ++k) (e_[k].delta > 0 ? plus : minus)++;
      int paired = std::min(plus, minus);
      for (int k = 0; k < minus - paired; ++k) out.push_back({-1, e_[i].a});
      for (int k = 0; k < plus - paired; ++k) out.push_back({+1, e_[i].a});
      i = j;
    }
    return MultiIndex(std::move(out));
  }

  bool is_irreducible() const {
    for (std::size_t i = 0; i + 1 < e_.size(); ++i)
      if (e_[i].a == e_[i + 1].a && e_[i].delta != e_[i + 1].delta) return false;
    return true;
  }

  // Entries sorted for the mu-order: gauge desc, then a desc, then delta desc.
  std::vector<ModeIndex> mu_sorted() const {
    std::vector<ModeIndex> v = e_;
    std::sort(v.begin(), v.end(), [](const ModeIndex& x, const ModeIndex& y) {
      auto gx = gauge_sq(x.a), gy = gauge_sq(y.a);
      if (gx != gy) return gx > gy;
      if (x.a != y.a) return x.a > y.a;
      return x.delta > y.delta;
    });
    return v;
  }

  // k-th largest gauge, 1-based.
  double mu(std::size_t k) const {
    auto v = mu_sorted();
    if (k == 0 || k > v.size()) throw std::out_of_range("mu: rank out of range");
    return gauge(v[k - 1].a);
  }
  double mu_min() const {
    std::int64_t best = -1;
    for (auto& j : e_) { auto g = gauge_sq(j.a); if (best < 0 || g < best) best = g; }
    if (best < 0) throw std::out_of_range("mu_min: empty multi-index");
    return std::sqrt(double(best));
  }
  double mu1() const {
    std::int64_t best = 0;
    for (auto& j : e_) best = std::max(best, gauge_sq(j.a));
    return std::sqrt(double(best));
  }

  // Net signed multiplicity per wavenumber, ascending in a; zero nets dropped.
  std::vector<std::pair<int, int>> net_deltas() const {
    std::vector<std::pair<int, int>> out;
    std::size_t i = 0;
    while (i < e_.size()) {
      std::size_t j = i;
      int net = 0;
      while (j < e_.size() && e_[j].a == e_[i].a) net += e_[j++].delta;
      if (net != 0) out.emplace_back(e_[i].a, net);
      i = j;
    }
    return out;
  }

  friend bool operator==(const MultiIndex& x, const MultiIndex& y) { return x.e_ == y.e_; }
  friend bool operator<(const MultiIndex& x, const MultiIndex& y) {
    if (x.e_.size() != y.e_.size()) return x.e_.size() < y.e_.size();
    for (std::size_t i = 0; i < x.e_.size(); ++i) {
      if (x.e_[i].a != y.e_[i].a) return x.e_[i].a < y.e_[i].a;
      if (x.e_[i].delta != y.e_[i].delta) return x.e_[i].delta < y.e_[i].delta;
    }
    return false;
  }

  // Display order: delta=+1 entries by ascending a, then delta=-1 entries.
  std::vector<ModeIndex> display_order() const {
    std::vector<ModeIndex> v;
    for (auto& j : e_) if (j.delta > 0) v.push_back(j);
    for (auto& j : e_) if (j.delta < 0) v.push_back(j);
    return v;
  }

  std::string str() const {
    std::string s = "[";
    for (auto& j : display_order()) {
      if (s.size() > 1) s += " ";
      s += (j.delta > 0 ? "+" : "-") + std::to_string(j.a);
    }
    return s + "]";
  }

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ull;
    for (auto& j : e_) {
      h = (h ^ std::size_t(std::uint32_t(j.a))) * 1099511628211ull;
      h = (h ^ std::size_t(j.delta > 0 ? 1 : 2)) * 1099511628211ull;
    }
    return h;
  }
};

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& m) const { return m.hash(); }
};

inline MultiIndex make_tuple(std::initializer_list<std::pair<int, int>> das) {
  std::vector<ModeIndex> v;
  for (auto& [d, a] : das) v.push_back({d, a});
  return MultiIndex(std::move(v));
}

// Action pair (+1,a),(-1,a): the monomial z_j = I_a.
inline MultiIndex action_pair(int a) { return make_tuple({{+1, a}, {-1, a}}); }

// Number of ordered arrangements of the entry multiset: (2m)! / prod(mult!).
inline std::int64_t orderings(const MultiIndex& j) {
  const auto& e = j.entries();
  std::int64_t f = 1;
  for (std::size_t i = 2; i <= e.size(); ++i) f *= std::int64_t(i);
  std::size_t i = 0;
  while (i < e.size()) {
    std::size_t k = i;
    while (k < e.size() && e[k] == e[i]) ++k;
    for (std::size_t r = 2; r <= k - i; ++r) f /= std::int64_t(r);
    i = k;
  }
  return f;
}

}  // namespace rnf
