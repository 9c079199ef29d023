// helpers.hpp — shared fixtures for the unit and acceptance suites.

#pragma once

#include "rnf/audit.hpp"

namespace rnf::testing {

using rnf::small_mu_irr_pool;
using rnf::with_action_pairs;
using rnf::random_subclass_ham;

inline FourierState nonresonant_state(Rng& rng, int K, const ModelParams& mp,
                                      const std::vector<const RationalHamiltonian*>& hams,
                                      double amp = 0.6, double cut = 1e-4) {
  return nonresonant_sample(rng, K, mp, hams, amp, cut);
}

}  // namespace rnf::testing
