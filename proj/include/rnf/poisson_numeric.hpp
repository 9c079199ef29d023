// poisson_numeric.hpp — numeric Poisson bracket between functional handles.
//
// {F,G} = i sum_a (dF/dxi_a dG/deta_a - dF/deta_a dG/dxi_a).
// This is the oracle the symbolic bracket is checked against.  All library
// functionals are holomorphic in the coordinates, so the finite-difference
// fallback uses real-step central differences per complex coordinate.

#pragma once

#include "rnf/state.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace rnf {

struct Gradient {
  std::vector<Complex> dxi, deta;  // index a + K
  explicit Gradient(int K = 0) : dxi(2 * K + 1), deta(2 * K + 1) {}
};

class Functional {
 public:
  virtual ~Functional() = default;
  virtual Complex value(const FourierState& z) const = 0;
  // return false if no analytic gradient is available
  virtual bool gradient(const FourierState& z, Gradient& g) const { (void)z; (void)g; return false; }
};

inline Gradient fd_gradient(const Functional& f, const FourierState& z) {
  const int K = z.window();
  Gradient g(K);
  const double eps = std::numeric_limits<double>::epsilon();
  FourierState w = z;
  w.set_reality_flag(false);
  for (int a = -K; a <= K; ++a) {
    {
      const double h = std::cbrt(eps) * std::max(1.0, std::abs(w.xi(a)));
      Complex save = w.xi(a);
      w.xi_at(a) = save + h;
      Complex fp = f.value(w);
      w.xi_at(a) = save - h;
      Complex fm = f.value(w);
      w.xi_at(a) = save;
      g.dxi[a + K] = (fp - fm) / (2.0 * h);
    }
    {
      const double h = std::cbrt(eps) * std::max(1.0, std::abs(w.eta(a)));
      Complex save = w.eta(a);
      w.eta_at(a) = save + h;
      Complex fp = f.value(w);
      w.eta_at(a) = save - h;
      Complex fm = f.value(w);
      w.eta_at(a) = save;
      g.deta[a + K] = (fp - fm) / (2.0 * h);
    }
  }
  return g;
}

inline Gradient gradient_of(const Functional& f, const FourierState& z) {
  Gradient g(z.window());
  if (f.gradient(z, g)) return g;
  return fd_gradient(f, z);
}

inline Complex poisson_numeric(const Functional& F, const Functional& G, const FourierState& z) {
  Gradient gf = gradient_of(F, z), gg = gradient_of(G, z);
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < gf.dxi.size(); ++i)
    acc += gf.dxi[i] * gg.deta[i] - gf.deta[i] * gg.dxi[i];
  return Complex{0.0, 1.0} * acc;
}

}  // namespace rnf
