// integrator.hpp — symplectic split-step integration of the truncated
// equations in Fourier space.
//
// Strang composition: the linear substep is the exact phase rotation
// xi_a -> e^{-i a^2 t} xi_a; the nonlinear substep is the exact pointwise
// rotation u -> e^{-i phi(|u|^2) t} u (NLS) or u -> e^{-i W t} u with
// W = V * |u|^2 (NLSP), both of which leave |u(x)| invariant.  Mass is
// conserved by each substep separately; energy errors are O(dt^2).

#pragma once

#include "rnf/model.hpp"
#include "rnf/state.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rnf {

enum class NonlinearMode { pseudospectral, exact_convolution };

struct IntegratorConfig {
  double dt = 1e-2;
  double T = 10.0;
  int grid_oversample = 4;          // grid size >= oversample * (2K+1)
  double ode_tolerance = 1e-10;     // adaptive flows
  std::vector<double> phi_higher;   // Taylor derivatives of phi beyond phi''
  double blowup_factor = 20.0;      // abort when ||u||_s exceeds this multiple
  int sample_every = 100;           // diagnostics cadence in steps
  double diag_s = 4.0;
  NonlinearMode mode = NonlinearMode::pseudospectral;
};

struct DiagnosticsRow {
  double t = 0, mass = 0, energy = 0, action_drift = 0, norm_s = 0, torus_dist = 0;
};

struct Trajectory {
  std::vector<DiagnosticsRow> samples;
  FourierState final_state;
  bool blew_up = false;
  double max_action_drift = 0;   // sup over samples of D_s(t)
  double max_mass_drift = 0;     // relative
  double max_energy_drift = 0;   // relative
};

struct BlowupError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// RAII plans for one grid size
class SpectralGrid {
  int n_ = 0;
  fftw_complex* buf_ = nullptr;
  fftw_plan fwd_{}, bwd_{};

 public:
  explicit SpectralGrid(int n) : n_(n) {
    buf_ = fftw_alloc_complex(n);
    fwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~SpectralGrid() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }
  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  int size() const { return n_; }

  // u(x_j) = sum_a xi_a e^{i a x_j} from window coefficients
  void to_physical(const std::vector<Complex>& xi, int K, std::vector<Complex>& u) {
    for (int i = 0; i < n_; ++i) buf_[i][0] = buf_[i][1] = 0.0;
    for (int a = -K; a <= K; ++a) {
      int bin = (a % n_ + n_) % n_;
      buf_[bin][0] = xi[a + K].real();
      buf_[bin][1] = xi[a + K].imag();
    }
    fftw_execute(bwd_);  // sign convention: backward = sum e^{+i a x}
    u.resize(n_);
    for (int i = 0; i < n_; ++i) u[i] = {buf_[i][0], buf_[i][1]};
  }

  // xi_a = (1/n) sum_j u(x_j) e^{-i a x_j}
  void to_modes(const std::vector<Complex>& u, int K, std::vector<Complex>& xi) {
    for (int i = 0; i < n_; ++i) { buf_[i][0] = u[i].real(); buf_[i][1] = u[i].imag(); }
    fftw_execute(fwd_);
    xi.assign(2 * K + 1, Complex{});
    const double inv = 1.0 / n_;
    for (int a = -K; a <= K; ++a) {
      int bin = (a % n_ + n_) % n_;
      xi[a + K] = Complex{buf_[bin][0], buf_[bin][1]} * inv;
    }
  }

  // full-spectrum read (frequencies -n/2..n/2), used for convolutions
  void to_spectrum(const std::vector<Complex>& u, std::vector<Complex>& hat) {
    for (int i = 0; i < n_; ++i) { buf_[i][0] = u[i].real(); buf_[i][1] = u[i].imag(); }
    fftw_execute(fwd_);
    hat.resize(n_);
    const double inv = 1.0 / n_;
    for (int i = 0; i < n_; ++i) hat[i] = Complex{buf_[i][0], buf_[i][1]} * inv;
  }
  void from_spectrum(const std::vector<Complex>& hat, std::vector<Complex>& u) {
    for (int i = 0; i < n_; ++i) { buf_[i][0] = hat[i].real(); buf_[i][1] = hat[i].imag(); }
    fftw_execute(bwd_);
    u.resize(n_);
    for (int i = 0; i < n_; ++i) u[i] = {buf_[i][0], buf_[i][1]};
  }
};

namespace detail_dyn {

// e^{i theta} pulled onto the unit circle (one Newton step) so repeated
// rotations do not leak modulus systematically
inline Complex unit_phase(double theta) {
  Complex p = std::polar(1.0, theta);
  return p * (0.5 * (3.0 - std::norm(p)));
}

inline int grid_size(int K, int oversample) {
  int n = oversample * (2 * K + 1);
  if (n < 4 * K + 2) n = 4 * K + 2;  // cubic terms must be alias-free
  int p2 = 1;
  while (p2 < n) p2 <<= 1;  // power of two: the 1/n scaling is exact
  return p2;
}

// W = V * |u|^2 on the grid (NLSP potential), zero mean
inline void hartree_potential(SpectralGrid& grid, const std::vector<Complex>& u,
                              std::vector<double>& W) {
  const int n = grid.size();
  std::vector<Complex> w(n), hat, Wc;
  for (int i = 0; i < n; ++i) w[i] = std::norm(u[i]);
  grid.to_spectrum(w, hat);
  for (int i = 0; i < n; ++i) {
    int freq = i <= n / 2 ? i : i - n;
    hat[i] = freq == 0 ? Complex{0, 0} : hat[i] / double(std::int64_t(freq) * freq);
  }
  grid.from_spectrum(hat, Wc);
  W.resize(n);
  for (int i = 0; i < n; ++i) W[i] = Wc[i].real();
}

}  // namespace detail_dyn

// H = sum a^2 |u_a|^2 + P(u) with P evaluated by grid quadrature (NLS) or
// the convolution form (NLSP); exact for polynomial nonlinearities inside
// the dealiased band.
inline double hamiltonian_value(const FourierState& z, const ModelParams& p,
                                const IntegratorConfig& cfg = {}) {
  const int K = z.window();
  double lin = 0;
  std::vector<Complex> xi(2 * K + 1);
  for (int a = -K; a <= K; ++a) {
    xi[a + K] = z.xi(a);
    lin += double(a) * a * std::norm(z.xi(a));
  }
  SpectralGrid grid(detail_dyn::grid_size(K, cfg.grid_oversample));
  std::vector<Complex> u;
  grid.to_physical(xi, K, u);
  double nl = 0;
  if (p.model == Model::NLS) {
    auto phi = PhiSeries::from(p, cfg.phi_higher);
    for (auto& v : u) nl += phi.g(std::norm(v));
    nl /= double(grid.size());  // (2 pi)^{-1} integral
  } else {
    std::vector<Complex> w(grid.size()), hat;
    for (int i = 0; i < grid.size(); ++i) w[i] = std::norm(u[i]);
    grid.to_spectrum(w, hat);
    const int n = grid.size();
    for (int i = 0; i < n; ++i) {
      int freq = i <= n / 2 ? i : i - n;
      if (freq != 0 && std::abs(freq) <= 2 * K)
        nl += 0.5 * std::norm(hat[i]) / (double(freq) * freq);
    }
    nl *= p.phi1;  // phi'(0) scales the quartic part
  }
  return lin + nl;
}

inline double mass_of(const FourierState& z) {
  double m = 0;
  for (int a = -z.window(); a <= z.window(); ++a) m += std::norm(z.xi(a));
  return m;
}

// Strang split-step integration with diagnostics
inline Trajectory integrate(const FourierState& z0, const ModelParams& p,
                            const IntegratorConfig& cfg) {
  if (!z0.reality_flag()) throw std::invalid_argument("integrate: reality-flagged state required");
  const int K = z0.window();
  const int n = detail_dyn::grid_size(K, cfg.grid_oversample);
  SpectralGrid grid(n);
  auto phi = PhiSeries::from(p, cfg.phi_higher);

  std::vector<Complex> xi(2 * K + 1), u;
  for (int a = -K; a <= K; ++a) xi[a + K] = z0.xi(a);

  std::vector<double> I0(2 * K + 1);
  for (int a = -K; a <= K; ++a) I0[a + K] = std::norm(z0.xi(a));

  const double s = cfg.diag_s;
  const double mass0 = mass_of(z0);
  const double energy0 = hamiltonian_value(z0, p, cfg);
  const double norm0 = z0.u_norm_s(s);

  Trajectory traj;
  auto snapshot = [&](double t) {
    DiagnosticsRow row;
    row.t = t;
    double mass = 0, drift = 0, ns = 0, tor = 0;
    for (int a = -K; a <= K; ++a) {
      double mod2 = std::norm(xi[a + K]);
      mass += mod2;
      double wa = std::pow(double(gauge_sq(a)), s);  // <a>^{2s}
      drift = std::max(drift, wa * std::abs(mod2 - I0[a + K]));
      ns += std::pow(double(gauge_sq(a)), s / 2) * std::sqrt(mod2);
      tor += std::pow(double(gauge_sq(a)), s / 2) * std::abs(std::sqrt(mod2) - std::sqrt(I0[a + K]));
    }
    row.mass = mass;
    FourierState cur(K);
    for (int a = -K; a <= K; ++a) cur.set_mode(a, xi[a + K]);
    row.energy = hamiltonian_value(cur, p, cfg);
    row.action_drift = drift;
    row.norm_s = ns;
    row.torus_dist = tor;
    traj.samples.push_back(row);
    traj.max_action_drift = std::max(traj.max_action_drift, drift);
    traj.max_mass_drift = std::max(traj.max_mass_drift, std::abs(mass - mass0) / std::max(1e-300, mass0));
    traj.max_energy_drift =
        std::max(traj.max_energy_drift, std::abs(row.energy - energy0) / std::max(1e-300, std::abs(energy0)));
    if (ns > cfg.blowup_factor * std::max(norm0, 1e-300)) {
      traj.blew_up = true;
      throw BlowupError("integrate: norm grew past the blow-up guard at t = " + std::to_string(t));
    }
  };

  const std::int64_t steps = std::llround(cfg.T / cfg.dt);
  const double dt = cfg.T / double(steps);
  snapshot(0.0);

  // phase constants pulled onto the unit circle (one Newton step) so the
  // repeated multiplications do not leak mass systematically; adjacent
  // linear half-steps are fused except at sampling boundaries
  std::vector<Complex> half_phase(2 * K + 1), full_phase(2 * K + 1);
  for (int a = -K; a <= K; ++a) {
    half_phase[a + K] = detail_dyn::unit_phase(-double(a) * a * dt / 2.0);
    full_phase[a + K] = detail_dyn::unit_phase(-double(a) * a * dt);
  }

  std::vector<double> W;
  bool at_boundary = true;  // a half linear step is pending at segment edges
  for (std::int64_t step = 0; step < steps; ++step) {
    const auto& lead = at_boundary ? half_phase : full_phase;
    for (int a = -K; a <= K; ++a) xi[a + K] *= lead[a + K];
    grid.to_physical(xi, K, u);
    if (p.model == Model::NLS) {
      for (auto& v : u) v *= detail_dyn::unit_phase(-phi.phi(std::norm(v)) * dt);
    } else {
      detail_dyn::hartree_potential(grid, u, W);
      for (int i = 0; i < n; ++i) u[i] *= detail_dyn::unit_phase(-W[i] * dt);
    }
    grid.to_modes(u, K, xi);
    bool sample_now = (step + 1) % cfg.sample_every == 0 || step + 1 == steps;
    if (sample_now) {
      for (int a = -K; a <= K; ++a) xi[a + K] *= half_phase[a + K];
      snapshot(double(step + 1) * dt);
      at_boundary = true;
    } else {
      at_boundary = false;  // fold the closing half step into the next lead
    }
  }

  traj.final_state = FourierState(K);
  for (int a = -K; a <= K; ++a) traj.final_state.set_mode(a, xi[a + K]);
  return traj;
}

// Galerkin vector field with the cubic convolution computed exactly on the
// dealiased grid; the reference path for aliasing cross-checks.
inline void galerkin_rhs(SpectralGrid& grid, const std::vector<Complex>& xi, int K,
                         const ModelParams& p, const PhiSeries& phi, std::vector<Complex>& out) {
  std::vector<Complex> u, w;
  grid.to_physical(xi, K, u);
  const int n = grid.size();
  w.resize(n);
  if (p.model == Model::NLS) {
    for (int i = 0; i < n; ++i) w[i] = phi.phi(std::norm(u[i])) * u[i];
  } else {
    std::vector<double> W;
    detail_dyn::hartree_potential(grid, u, W);
    for (int i = 0; i < n; ++i) w[i] = W[i] * u[i];
  }
  std::vector<Complex> nl;
  grid.to_modes(w, K, nl);
  out.assign(2 * K + 1, Complex{});
  for (int a = -K; a <= K; ++a)
    out[a + K] = Complex{0, -1} * (double(a) * a * xi[a + K] + nl[a + K]);
}

}  // namespace rnf
