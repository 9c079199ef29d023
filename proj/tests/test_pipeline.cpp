#include "rnf/flow.hpp"
#include "rnf/pipeline.hpp"
#include "rnf/sampling.hpp"

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace rnf;
using namespace rnf::testing;

namespace {
const ModelParams kP{0.0, 1.0, 1.0, Model::NLS, -1};  // phi'' != 0 keeps K6 alive

PipelineOptions desk_options() {
  PipelineOptions opt;
  opt.r = 2;
  opt.N = 12.0;
  opt.max_stage_order = 4;
  opt.order_cap = 4;
  return opt;
}
}  // namespace

TEST_CASE("action-only input passes through the pipeline untouched", "[pipeline]") {
  const int K = 4;
  auto opt = desk_options();
  RationalHamiltonian stream = RationalHamiltonian::from_poly(z4_poly(K), kP, K);
  auto integrable = stream;
  std::size_t dropped = 0;
  auto st = pipeline_stage(stream, integrable, 3, HomologicalMode::Z4, kP, opt, dropped);
  REQUIRE(st.chi.empty());
  REQUIRE(dropped == 0);
}

TEST_CASE("order-8 synthetic step: action part kept, chi in the starred class", "[pipeline]") {
  const int K = 5;
  Rng rng(5);
  auto pool = small_mu_irr_pool(K);
  // synthetic octic: three irreducible-core monomials plus one action-only
  RationalHamiltonian K8(K);
  for (int i = 0; i < 3; ++i) {
    RationalTerm t;
    t.pi = with_action_pairs(pool[i], {int(rng.next_u64() % (2 * K + 1)) - K});
    t.c = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    K8.terms.push_back(t);
    K8.terms.push_back(t.conjugated());
  }
  RationalTerm act;
  act.pi = with_action_pairs(MultiIndex{}, {0, 1, -2, 3});
  act.c = {0.4, 0.0};
  K8.terms.push_back(act);
  K8.merge();

  auto Z4t = RationalHamiltonian::from_poly(z4_poly(K), kP, K);
  auto Z6t = RationalHamiltonian::from_poly(z6_poly(K), kP, K);
  auto integrable = Z4t + Z6t;
  RationalHamiltonian stream = integrable + K8;

  auto opt = desk_options();
  opt.order_cap = 4;
  std::size_t dropped = 0;
  auto st = pipeline_stage(stream, integrable, 4, HomologicalMode::Z4Z6, kP, opt, dropped);

  REQUIRE(!st.chi.empty());
  REQUIRE(st.z_kept.size() == 1);  // the action-only octic survives as Z8
  auto rep = subclass_check(st.chi, SubclassTag::r_Omega_star);
  INFO(rep.violation);
  REQUIRE(rep.ok);
  REQUIRE(rep.r == 2);

  // re-verify the homological residual numerically
  auto resid = bracket(integrable, st.chi, kP);
  auto [A8, R8] = split_action_irreducible(K8);
  Rng rng2(17);
  for (int t = 0; t < 10; ++t) {
    auto z = nonresonant_state(rng2, K, kP, {&st.chi});
    Complex lhs = evaluate(resid, z, kP), rhs = evaluate(R8, z, kP);
    REQUIRE(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
  }

  // the eliminated order has no non-action terms left in the stream
  auto left = detail_pipe::select_order(stream, 4);
  for (auto& t : left.terms) REQUIRE(t.pi.irreducible_part().empty());
}

TEST_CASE("full desk pipeline at r = 2", "[pipeline]") {
  const int K = 5;
  auto opt = desk_options();
  auto res = normal_form_pipeline(K, kP, opt);

  REQUIRE(res.truncation_certificate_ok);
  REQUIRE(!res.k6_kept.empty());
  REQUIRE(!res.k6_tail.empty());
  REQUIRE(res.stages.size() == 2);  // tau4 and the order-4 tau6 stage
  REQUIRE(!res.stages[0].chi.empty());
  for (auto& st : res.stages) REQUIRE(st.certificate_ok);

  // every accumulated Z term depends only on the actions
  for (auto& t : res.z_terms.terms) REQUIRE(t.pi.irreducible_part().empty());

  // residual contains the truncated sextic tail: its vector field dominates
  // at small eps with slope 2r+1 = 5
  SamplingLaw law{Model::NLS, 4.0, K, 3};
  auto I = sample_actions(law, 0);
  Rng prng(9, 0);
  auto z0 = build_initial_state(I, 1.0, random_phases(K, prng), 4.0, false);
  std::vector<double> le, ln;
  for (double eps : {0.1, 0.0562, 0.0316, 0.0178, 0.01, 0.0056}) {
    auto z = z0.scaled(eps);
    le.push_back(std::log(eps));
    ln.push_back(std::log(vector_field_norm(res.residual, z, kP, 4.0)));
  }
  double n = le.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < le.size(); ++i) {
    sx += le[i]; sy += ln[i]; sxx += le[i] * le[i]; sxy += le[i] * ln[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  REQUIRE(std::abs(slope - 5.0) / 5.0 <= 0.15);
}

TEST_CASE("tau factors are near-identity on screened samples", "[pipeline]") {
  const int K = 5;
  auto opt = desk_options();
  auto res = normal_form_pipeline(K, kP, opt);
  REQUIRE(res.tau.size() >= 3);

  SamplingLaw law{Model::NLS, 4.0, K, 21};
  FlowConfig fc;
  fc.tolerance = 1e-9;
  const double eps = 0.1;
  Rng prng(31, 0);
  auto I = sample_actions(law, 4);
  auto z = build_initial_state(I, eps, random_phases(K, prng), 4.0);

  FourierState w = z;
  for (auto it = res.tau.rbegin(); it != res.tau.rend(); ++it) {
    RationalFunctional f(it->generator, kP);
    w = flow_generic(f, w, it->time, fc);
  }
  double disp = (w - z).norm_s(4.0);
  REQUIRE(disp > 0.0);
  REQUIRE(disp <= std::pow(eps, 1.5));
  REQUIRE(w.reality_defect() <= 1e-9);
}
