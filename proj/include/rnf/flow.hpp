// flow.hpp — adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) flows for
// generic Hamiltonian vector fields, realizing the canonical transformations
// as unit-time flows.
//
// Physical orientation throughout: xi' = -i dH/deta, eta' = +i dH/dxi, so
// the flow of Z2 is the rotation xi_a -> e^{-i(a^2 + phi(0)) t} xi_a.

#pragma once

#include "rnf/integrator.hpp"
#include "rnf/model.hpp"
#include "rnf/poisson_numeric.hpp"
#include "rnf/state.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace rnf {

struct FlowConfig {
  double tolerance = 1e-10;
  double h_init = 1e-2;
  double h_min = 1e-12;
  std::int64_t max_steps = 2000000;
};

using VectorField = std::function<void(const FourierState&, std::vector<Complex>& dxi,
                                       std::vector<Complex>& deta)>;

// Hamiltonian field from a gradient-capable functional
inline VectorField hamiltonian_field(const Functional& H) {
  return [&H](const FourierState& z, std::vector<Complex>& dxi, std::vector<Complex>& deta) {
    Gradient g = gradient_of(H, z);
    const std::size_t n = g.dxi.size();
    dxi.resize(n);
    deta.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      dxi[i] = Complex{0, -1} * g.deta[i];
      deta[i] = Complex{0, 1} * g.dxi[i];
    }
  };
}

// one Dormand-Prince 5(4) step; returns the embedded error estimate
namespace detail_flow {

struct Dp54 {
  static constexpr double c[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static constexpr double b5[7] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
                                   11.0 / 84, 0};
  static constexpr double b4[7] = {5179.0 / 57600,    0,           7571.0 / 16695, 393.0 / 640,
                                   -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
};

}  // namespace detail_flow

// Flow of the field to time t (either sign).  Throws on step-size collapse;
// denominator-floor errors from guarded rational fields propagate.
inline FourierState flow_generic(const VectorField& field, const FourierState& z0, double t,
                                 const FlowConfig& cfg = {}) {
  const int K = z0.window();
  const std::size_t n = 2 * K + 1;
  std::vector<Complex> xi(n), eta(n);
  for (int a = -K; a <= K; ++a) { xi[a + K] = z0.xi(a); eta[a + K] = z0.eta(a); }

  auto pack = [&](const std::vector<Complex>& x, const std::vector<Complex>& e) {
    FourierState z(K, false);
    for (int a = -K; a <= K; ++a) { z.xi_at(a) = x[a + K]; z.eta_at(a) = e[a + K]; }
    return z;
  };

  double time = 0;
  const double sign = t >= 0 ? 1.0 : -1.0;
  const double total = std::abs(t);
  double h = std::min(cfg.h_init, total > 0 ? total : cfg.h_init);
  if (total == 0) return z0;

  std::vector<std::vector<Complex>> kx(7, std::vector<Complex>(n)), ke(7, std::vector<Complex>(n));
  std::vector<Complex> tx(n), te(n);

  std::int64_t steps = 0;
  while (time < total) {
    if (++steps > cfg.max_steps) throw std::runtime_error("flow_generic: step budget exhausted");
    h = std::min(h, total - time);
    using T = detail_flow::Dp54;
    for (int stage = 0; stage < 7; ++stage) {
      for (std::size_t i = 0; i < n; ++i) {
        Complex ax = xi[i], ae = eta[i];
        for (int j = 0; j < stage; ++j) {
          ax += sign * h * T::a[stage][j] * kx[j][i];
          ae += sign * h * T::a[stage][j] * ke[j][i];
        }
        tx[i] = ax;
        te[i] = ae;
      }
      field(pack(tx, te), kx[stage], ke[stage]);
    }
    double err = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex e5{0, 0}, e4{0, 0};
      for (int j = 0; j < 7; ++j) {
        e5 += T::b5[j] * kx[j][i];
        e4 += T::b4[j] * kx[j][i];
      }
      double sc = cfg.tolerance * (1.0 + std::abs(xi[i]));
      err = std::max(err, std::abs(h * (e5 - e4)) / sc);
      e5 = e4 = Complex{0, 0};
      for (int j = 0; j < 7; ++j) {
        e5 += T::b5[j] * ke[j][i];
        e4 += T::b4[j] * ke[j][i];
      }
      sc = cfg.tolerance * (1.0 + std::abs(eta[i]));
      err = std::max(err, std::abs(h * (e5 - e4)) / sc);
    }
    if (err <= 1.0) {
      for (std::size_t i = 0; i < n; ++i) {
        Complex sx{0, 0}, se{0, 0};
        for (int j = 0; j < 7; ++j) {
          sx += T::b5[j] * kx[j][i];
          se += T::b5[j] * ke[j][i];
        }
        xi[i] += sign * h * sx;
        eta[i] += sign * h * se;
      }
      time += h;
    }
    double factor = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::min(5.0, std::max(0.2, factor));
    if (h < cfg.h_min) throw std::runtime_error("flow_generic: step size collapsed");
  }
  FourierState out = pack(xi, eta);
  out.set_reality_flag(z0.reality_flag());
  return out;
}

inline FourierState flow_generic(const Functional& H, const FourierState& z0, double t,
                                 const FlowConfig& cfg = {}) {
  return flow_generic(hamiltonian_field(H), z0, t, cfg);
}

// reference Galerkin integration (exact dealiased convolution nonlinearity),
// for aliasing cross-checks of the split-step path
inline FourierState integrate_reference(const FourierState& z0, const ModelParams& p,
                                        const IntegratorConfig& icfg, double T,
                                        const FlowConfig& fcfg = {}) {
  const int K = z0.window();
  auto grid = std::make_shared<SpectralGrid>(detail_dyn::grid_size(K, icfg.grid_oversample));
  auto phi = PhiSeries::from(p, icfg.phi_higher);
  VectorField field = [grid, K, p, phi](const FourierState& z, std::vector<Complex>& dxi,
                                        std::vector<Complex>& deta) {
    std::vector<Complex> xi(2 * K + 1), rhs;
    for (int a = -K; a <= K; ++a) xi[a + K] = z.xi(a);
    galerkin_rhs(*grid, xi, K, p, phi, rhs);
    dxi = rhs;
    deta.assign(2 * K + 1, Complex{});
    for (std::size_t i = 0; i < deta.size(); ++i) deta[i] = std::conj(rhs[i]);
  };
  return flow_generic(field, z0, T, fcfg);
}

}  // namespace rnf
