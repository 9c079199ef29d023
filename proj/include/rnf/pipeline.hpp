// pipeline.hpp — the rational normal-form pipeline on a mode window:
// resonant polynomial normal form through order 6, frequency truncation,
// elimination of the irreducible sextic part with Z4, then iterated
// elimination with Z4 + Z6, accumulating action-only terms and generators.
//
// Transformations are unit-time flows in the physical orientation, so
// H o Phi^1_g = sum_alpha ((-1)^alpha / alpha!) ad_g^alpha H with
// ad_g F = {F, g}; a generator with {Z, g} = R cancels R at its order.
// The alpha = 1 bracket of the integrable part is substituted structurally
// by that identity, so the cancellation is term-wise exact; higher brackets
// use the generic closed bracket.

#pragma once

#include "rnf/birkhoff.hpp"
#include "rnf/rational_terms.hpp"

#include <string>
#include <vector>

namespace rnf {

struct PipelineOptions {
  int r = 2;              // residual target: vector field O(eps^{2r+1})
  double N = 12.0;        // frequency cut-off of the truncation split
  double nu = -1;         // truncation constant, default 1/(2m)
  int max_stage_order = 4;   // eliminate non-action terms of orders 3..this
  int order_cap = 4;         // drop stream terms beyond this order
  std::size_t max_terms = 200000;
  double cert_C = -1;     // derivative-distribution constant, default 6r''
};

struct TauFactor {
  std::string name;
  RationalHamiltonian generator;
  double time = 1.0;  // flow time realizing this factor
};

struct PipelineStage {
  std::string name;
  int order = 0;
  RationalHamiltonian chi;
  RationalHamiltonian z_kept;  // action-only terms collected at this order
  SubclassReport chi_subclass;
  double chi_weight = 0;
  bool certificate_ok = true;
};

struct PipelineResult {
  int window = 0;
  ModelParams params;
  PipelineOptions options;
  BnfResult bnf;
  bool truncation_certificate_ok = true;
  Poly k6_kept, k6_tail;          // K6 split at the cut-off
  std::vector<PipelineStage> stages;
  RationalHamiltonian residual;   // orders above the eliminated range
  RationalHamiltonian z_terms;    // accumulated action-only rational terms
  std::vector<TauFactor> tau;     // tau2 factors then tau4, tau6 generators
  std::size_t dropped_terms = 0;  // pruned beyond order_cap
};

namespace detail_pipe {

// stream -= terms (structural, exact)
inline void subtract(RationalHamiltonian& S, const RationalHamiltonian& T) {
  S = S + T.scaled({-1.0, 0.0});
}

inline RationalHamiltonian select_order(const RationalHamiltonian& S, int order) {
  RationalHamiltonian out(S.window);
  for (auto& t : S.terms)
    if (t.order() == order) out.terms.push_back(t);
  return out;
}

inline std::size_t prune_order_cap(RationalHamiltonian& S, int cap) {
  std::size_t before = S.terms.size();
  std::erase_if(S.terms, [cap](const RationalTerm& t) { return t.order() > cap; });
  return before - S.terms.size();
}

}  // namespace detail_pipe

// One elimination stage: solve {Z, chi} = R for the non-action part R of the
// given order, then push the stream through the Lie series of Phi^1_chi.
// `integrable` is the Z4(+Z6) term list whose alpha = 1 bracket collapses to
// R by the homological identity.
inline PipelineStage pipeline_stage(RationalHamiltonian& stream, const RationalHamiltonian& integrable,
                                    int order, HomologicalMode mode, const ModelParams& mp,
                                    const PipelineOptions& opt, std::size_t& dropped) {
  PipelineStage st;
  st.order = order;
  st.name = (mode == HomologicalMode::Z4 ? "tau4@order" : "tau6@order") + std::to_string(order);

  auto at_order = detail_pipe::select_order(stream, order);
  auto [A, R] = split_action_irreducible(at_order);
  st.z_kept = A;
  if (R.empty()) {
    st.chi = RationalHamiltonian(stream.window);
    return st;
  }
  st.chi = solve_homological(R, mode);
  st.chi_subclass = subclass_check(st.chi);
  st.chi_weight = st.chi.weight();
  double C = opt.cert_C > 0 ? opt.cert_C : 6.0 * std::max(1, order);
  st.certificate_ok = distribute_derivatives_certificate(st.chi, C).ok;

  BracketOptions bopt;
  bopt.max_terms = opt.max_terms;

  // alpha = 1: {S, chi} = R + {S - integrable, chi}; the integrable bracket
  // collapses to R by the homological identity, cancelling R term-wise.
  // Operands whose bracket output already exceeds the order cap are skipped
  // up front (their contributions would be pruned immediately).
  const int chi_order = st.chi.order();
  RationalHamiltonian rest = stream;  // S - integrable, including R
  detail_pipe::subtract(rest, integrable);
  std::erase_if(rest.terms, [&](const RationalTerm& t) {
    bool drop = t.order() + chi_order - 1 > opt.order_cap;
    if (drop) ++dropped;
    return drop;
  });
  RationalHamiltonian ad1 = bracket(rest, st.chi, mp, bopt);
  dropped += detail_pipe::prune_order_cap(ad1, opt.order_cap);
  detail_pipe::subtract(stream, R);
  detail_pipe::subtract(stream, ad1);

  // alpha >= 2: iterate the generic bracket on ad^1 = R + {rest, chi}
  RationalHamiltonian ad_prev = ad1 + R;
  double fact = 1.0;
  for (int alpha = 2; alpha <= 4; ++alpha) {
    ad_prev = bracket(ad_prev, st.chi, mp, bopt);
    dropped += detail_pipe::prune_order_cap(ad_prev, opt.order_cap);
    if (ad_prev.empty()) break;
    fact *= alpha;
    double sign = (alpha % 2 == 0) ? 1.0 : -1.0;
    stream = stream + ad_prev.scaled({sign / fact, 0.0});
  }
  stream.merge();
  dropped += detail_pipe::prune_order_cap(stream, opt.order_cap);
  return st;
}

inline PipelineResult normal_form_pipeline(int K, const ModelParams& mp, const PipelineOptions& opt) {
  PipelineResult res;
  res.window = K;
  res.params = mp;
  res.options = opt;
  res.bnf = desk_birkhoff_normal_form(K);

  // frequency truncation of the sextic irreducible part
  auto split = truncate_resonant(res.bnf.k6, opt.N, opt.nu);
  res.truncation_certificate_ok = split.certificate_ok;
  res.k6_kept = split.kept;
  res.k6_tail = split.rest;

  auto Z4t = RationalHamiltonian::from_poly(res.bnf.z4, mp, K);
  auto Z6t = RationalHamiltonian::from_poly(res.bnf.z6_action, mp, K);
  auto integrable4 = Z4t;
  auto integrable46 = Z4t + Z6t;

  // stream: Z4 + Z6 + K6^N (Z2 commutes with every resonant rational term)
  RationalHamiltonian stream = integrable46 + RationalHamiltonian::from_poly(res.k6_kept, mp, K);

  // tau2 factors (polynomial eliminations already performed inside the
  // order-6 normal form): realized as flows of -chi4, -chi6
  res.tau.push_back({"tau2:chi4", RationalHamiltonian::from_poly(res.bnf.chi4, mp, K).scaled({-1, 0}), 1.0});
  res.tau.push_back({"tau2:chi6", RationalHamiltonian::from_poly(res.bnf.chi6, mp, K).scaled({-1, 0}), 1.0});

  // tau4: eliminate the kept irreducible sextic part with Z4
  auto st4 = pipeline_stage(stream, integrable4, 3, HomologicalMode::Z4, mp, opt, res.dropped_terms);
  if (!st4.chi.empty()) res.tau.push_back({"tau4", st4.chi, 1.0});
  res.stages.push_back(std::move(st4));

  // tau6: iterate Z4+Z6 eliminations over the higher orders
  for (int order = 4; order <= opt.max_stage_order; ++order) {
    auto st = pipeline_stage(stream, integrable46, order, HomologicalMode::Z4Z6, mp, opt,
                             res.dropped_terms);
    if (!st.chi.empty()) res.tau.push_back({st.name, st.chi, 1.0});
    res.stages.push_back(std::move(st));
  }

  // collect what remains: action-only terms join Z, the rest is residual
  auto [A, R] = split_action_irreducible(stream);
  res.z_terms = A;
  res.residual = R + RationalHamiltonian::from_poly(res.k6_tail, mp, K);
  return res;
}

// || X_H (z) ||_s for a rational Hamiltonian via the analytic gradient
inline double vector_field_norm(const RationalHamiltonian& H, const FourierState& z,
                                const ModelParams& mp, double s,
                                const DenominatorFloor& floor = {}) {
  Gradient g(z.window());
  add_gradient(H, z, mp, g, floor);
  double acc = 0;
  const int K = z.window();
  for (int a = -K; a <= K; ++a)
    acc += std::pow(double(gauge_sq(a)), s / 2) * (std::abs(g.deta[a + K]) + std::abs(g.dxi[a + K]));
  return acc;
}

}  // namespace rnf
