// enumerate.hpp — bounded enumeration of the classes Z_m, M_m, R_m.
//
// A canonical tuple is the pair (plus-side multiset, minus-side multiset) of
// wavenumbers, each non-decreasing.  For M the last minus entry is forced by
// the momentum sum; for R the last two are the roots of a quadratic, so the
// scan costs O(K^(2m-2)) instead of O(K^(2m)).

#pragma once

#include "rnf/indices.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace rnf {

struct ResourceBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// number of non-decreasing q-tuples over [-K, K]
inline double multiset_count(int q, int K) {
  double n = 2.0 * K + 1, r = 1;
  for (int i = 0; i < q; ++i) r = r * (n + i) / (i + 1);
  return r;
}

inline void for_each_multiset(int q, int lo, int K, std::vector<int>& buf,
                              const std::function<void(const std::vector<int>&)>& f) {
  if (q == 0) { f(buf); return; }
  for (int a = lo; a <= K; ++a) {
    buf.push_back(a);
    for_each_multiset(q - 1, a, K, buf, f);
    buf.pop_back();
  }
}

// integer solutions x <= y of x + y = S, x^2 + y^2 = T
inline bool solve_pair(std::int64_t S, std::int64_t T, std::int64_t& x, std::int64_t& y) {
  std::int64_t disc = 2 * T - S * S;  // (x - y)^2
  if (disc < 0) return false;
  std::int64_t d = std::int64_t(std::sqrt(double(disc)));
  while (d * d > disc) --d;
  while ((d + 1) * (d + 1) <= disc) ++d;
  if (d * d != disc) return false;
  if ((S - d) % 2 != 0) return false;
  x = (S - d) / 2;
  y = (S + d) / 2;
  return true;
}

}  // namespace detail

// Every canonical multi-index of length 2m in the class, entries |a| <= K,
// each exactly once.  Throws ResourceBudgetError if the projected scan size
// exceeds the cap.
inline std::vector<MultiIndex> enumerate_class(int m, int K, ClassTag cls,
                                               bool irreducible_only = false,
                                               double budget_cap = 5e8) {
  if (m < 1) throw std::invalid_argument("enumerate_class: m >= 1 required");
  const int free_minus = cls == ClassTag::Z ? m : (cls == ClassTag::M ? m - 1 : std::max(0, m - 2));
  const double projected = detail::multiset_count(m, K) * detail::multiset_count(free_minus, K);
  if (projected > budget_cap)
    throw ResourceBudgetError("enumerate_class: projected scan " + std::to_string(projected) +
                              " exceeds budget " + std::to_string(budget_cap));

  std::vector<MultiIndex> out;
  auto emit = [&](const std::vector<int>& plus, const std::vector<int>& minus) {
    std::vector<ModeIndex> v;
    v.reserve(2 * m);
    for (int a : plus) v.push_back({+1, a});
    for (int a : minus) v.push_back({-1, a});
    MultiIndex j(std::move(v));
    if (irreducible_only && !j.is_irreducible()) return;
    out.push_back(std::move(j));
  };

  std::vector<int> plus, minus;
  detail::for_each_multiset(m, -K, K, plus, [&](const std::vector<int>& P) {
    std::int64_t sp = 0, qp = 0;
    for (int a : P) { sp += a; qp += std::int64_t(a) * a; }
    switch (cls) {
      case ClassTag::Z:
        detail::for_each_multiset(m, -K, K, minus, [&](const std::vector<int>& M) { emit(P, M); });
        break;
      case ClassTag::M:
        detail::for_each_multiset(m - 1, -K, K, minus, [&](const std::vector<int>& M) {
          std::int64_t last = sp;
          for (int a : M) last -= a;
          if (last < (M.empty() ? -K : std::int64_t(M.back())) || last > K) return;
          auto Mfull = M;
          Mfull.push_back(int(last));
          emit(P, Mfull);
        });
        break;
      case ClassTag::R: {
        if (m == 1) {
          if (sp >= -K && sp <= K) emit(P, {int(sp)});  // P has one entry a; minus must be {a}
          break;
        }
        detail::for_each_multiset(m - 2, -K, K, minus, [&](const std::vector<int>& M) {
          std::int64_t S = sp, T = qp;
          for (int a : M) { S -= a; T -= std::int64_t(a) * a; }
          std::int64_t x, y;
          if (!detail::solve_pair(S, T, x, y)) return;
          if (x < (M.empty() ? -K : std::int64_t(M.back())) || y > K || x > y) return;
          auto Mfull = M;
          Mfull.push_back(int(x));
          Mfull.push_back(int(y));
          emit(P, Mfull);
        });
        break;
      }
      default:
        throw std::invalid_argument("enumerate_class: class must be Z, M or R");
    }
  });
  return out;
}

// Irreducible members of R_m for m <= max_m (the index set quantified over in
// the non-resonance conditions), restricted to the window.
inline std::vector<MultiIndex> enumerate_irreducible_resonant(int max_len, int K,
                                                              double budget_cap = 5e8) {
  std::vector<MultiIndex> out;
  for (int m = 1; 2 * m <= max_len; ++m) {
    auto v = enumerate_class(m, K, ClassTag::R, /*irreducible_only=*/true, budget_cap);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

}  // namespace rnf
