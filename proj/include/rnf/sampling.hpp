// sampling.hpp — deterministic counter-based RNG, the action sampling laws,
// and assembly of random initial data.

#pragma once

#include "rnf/model.hpp"
#include "rnf/state.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace rnf {

// SplitMix64 over a counter; substreams are keyed by (seed, stream).  The
// same (seed, stream, draw index) always yields the same value, on any
// platform, which keeps Monte Carlo runs reproducible bit for bit.
class Rng {
  std::uint64_t key_, ctr_ = 0;

  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream * 0x9e3779b97f4a7c15ull + 0x165667b19e3779f9ull))) {}

  std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ull * ++ctr_); }
  // uniform in (0,1); never returns 0 or 1 exactly
  double uniform() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double angle() { return uniform() * 2.0 * std::numbers::pi; }
};

struct SamplingLaw {
  Model model = Model::NLS;
  double s = 4.0;
  int K = 16;
  std::uint64_t seed = 1;
};

// NLS:  I_a^2 uniform on (0, <a>^{-4s-8})  =>  draw V and set I_a = sqrt(V).
// NLSP: I_a   uniform on (0, <a>^{-2s-4}).
// Either way sup_a <a>^{2s+4} I_a < 1.
inline ActionField sample_actions(const SamplingLaw& law, std::uint64_t trial = 0) {
  Rng rng(law.seed, trial);
  ActionField I(law.K);
  for (int a = -law.K; a <= law.K; ++a) {
    double g2 = double(gauge_sq(a));
    if (law.model == Model::NLS) {
      double support = std::pow(g2, -(2.0 * law.s + 4.0));  // <a>^{-4s-8}
      I.at(a) = std::sqrt(rng.uniform() * support);
    } else {
      I.at(a) = rng.uniform() * std::pow(g2, -(law.s + 2.0));  // <a>^{-2s-4}
    }
  }
  return I;
}

inline std::vector<double> random_phases(int K, Rng& rng) {
  std::vector<double> th(2 * K + 1);
  for (auto& t : th) t = rng.angle();
  return th;
}

// normalizing constant of the random initial datum
inline double initial_data_constant() { return std::tanh(std::numbers::pi) / (2.0 * std::numbers::pi); }

// u0 = c eps sum_a sqrt(I_a) e^{i(ax + theta_a)};  asserts the norm budget
// ||u0||_s < eps/2 which holds for every law-conforming draw.
inline FourierState build_initial_state(const ActionField& I, double eps,
                                        const std::vector<double>& phases, double s,
                                        bool enforce_budget = true) {
  const int K = I.window();
  if (int(phases.size()) != 2 * K + 1)
    throw std::invalid_argument("build_initial_state: phase vector size mismatch");
  FourierState z(K);
  const double c = initial_data_constant();
  for (int a = -K; a <= K; ++a) {
    if (I[a] < 0) throw std::domain_error("build_initial_state: negative action");
    z.set_mode(a, std::polar(c * eps * std::sqrt(I[a]), phases[a + K]));
  }
  if (enforce_budget && z.u_norm_s(s) >= eps / 2.0)
    throw std::domain_error("build_initial_state: ||u0||_s exceeds eps/2 budget");
  return z;
}

// generic random real state for tests: xi_a uniform in a disc scaled by <a>^{-s-2}
inline FourierState random_state(int K, Rng& rng, double amp, double s = 2.0) {
  FourierState z(K);
  for (int a = -K; a <= K; ++a) {
    double r = amp * std::pow(double(gauge_sq(a)), -(s + 2.0) / 2.0) * rng.uniform();
    z.set_mode(a, std::polar(r, rng.angle()));
  }
  return z;
}

}  // namespace rnf
