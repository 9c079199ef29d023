// model.hpp — model parameters shared across the library.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rnf {

enum class Model { NLS, NLSP };

// Taylor data of the nonlinearity phi at 0 and the convolution kernel choice.
// NLS:  Vhat_a = 1.   NLSP: Vhat_a = a^{-2}, Vhat_0 = 0.
struct ModelParams {
  double phi0 = 0.0;   // phi(0), the mass
  double phi1 = 1.0;   // phi'(0), must be nonzero
  double phi2 = 0.0;   // phi''(0)
  Model model = Model::NLS;
  int tail_window = -1;  // window for sums over b in Z; -1 = 4x the state window

  void validate() const {
    if (phi1 == 0.0) throw std::invalid_argument("ModelParams: phi'(0) must be nonzero");
  }
  int tail(int state_window) const { return tail_window > 0 ? tail_window : 4 * state_window; }
};

inline double vhat(Model m, int a) {
  if (m == Model::NLS) return 1.0;
  return a == 0 ? 0.0 : 1.0 / (double(a) * a);
}

// phi as a truncated Taylor series phi(t) = sum_k phi_k t^k / k!.
// coefficients beyond phi2 extend the cubic model for the integrator.
struct PhiSeries {
  std::vector<double> deriv;  // deriv[k] = phi^{(k)}(0)

  static PhiSeries from(const ModelParams& p, std::vector<double> higher = {}) {
    PhiSeries s;
    s.deriv = {p.phi0, p.phi1, p.phi2};
    for (double d : higher) s.deriv.push_back(d);
    return s;
  }

  double phi(double t) const {
    double acc = 0, fact = 1, pw = 1;
    for (std::size_t k = 0; k < deriv.size(); ++k) {
      if (k) { fact *= double(k); pw *= t; }
      acc += deriv[k] * pw / fact;
    }
    return acc;
  }
  // g(t) = int_0^t phi
  double g(double t) const {
    double acc = 0, fact = 1, pw = t;
    for (std::size_t k = 0; k < deriv.size(); ++k) {
      if (k) { fact *= double(k); pw *= t; }
      acc += deriv[k] * pw / (fact * double(k + 1));
    }
    return acc;
  }
};

}  // namespace rnf
