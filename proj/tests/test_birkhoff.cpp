#include "rnf/birkhoff.hpp"
#include "rnf/sampling.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace rnf;

TEST_CASE("sextic extraction: alpha and gamma vanish, beta is the kernel", "[birkhoff]") {
  const int K = 5;  // the acceptance suite re-runs this at K = 8
  auto ex = extract_z6_oracle(K);
  for (auto& [a, c] : ex.alpha) REQUIRE(c.is_zero());
  for (auto& [t, c] : ex.gamma) REQUIRE(c.is_zero());
  int checked = 0;
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b) {
      if (a == b) continue;
      auto it = ex.beta.find({a, b});
      REQUIRE(it != ex.beta.end());
      REQUIRE(it->second == beta_expected(a, b));
      ++checked;
    }
  REQUIRE(checked == (2 * K + 1) * 2 * K);
  REQUIRE(ex.beta.count({0, 1}) == 1);
  REQUIRE(ex.beta[{0, 1}] == Coeff::gen(0, 2, 0, Rat(-1, 2)));
}

TEST_CASE("irreducible resonant part of (1/2){Q4,chi4} vanishes on the window", "[birkhoff]") {
  // computed outcome of the side claim: the cubic NLS Birkhoff form at order
  // six depends only on the actions
  auto ex = extract_z6_oracle(5);
  REQUIRE(ex.irreducible_part.empty());
}

TEST_CASE("desk normal form assembles Z6 and the sextic data", "[birkhoff]") {
  const int K = 4;
  auto r = desk_birkhoff_normal_form(K);

  // the action part of the degree-6 resonant normal form must be exactly the
  // closed-form Z6 over the window
  REQUIRE((r.z6_action - z6_poly(K)).empty());

  // K6 contains only irreducible resonant monomials, and equals the
  // extraction's leftover plus the P6 contribution
  for (auto& [j, c] : r.k6.coeffs()) {
    REQUIRE(j.classify() == ClassTag::R);
    REQUIRE(j.is_irreducible());
  }
  // with K''6 = 0 the whole K6 comes from P6: coefficient phi''/120 each
  for (auto& [j, c] : r.k6.coeffs()) REQUIRE(c == Coeff::gen(0, 0, 1, Rat(1, 120)));
  REQUIRE(!r.k6.empty());

  // chi6 solves the degree-6 homological equation: {Z2, chi6} = -nonres(h6)
  Poly resid = poisson_poly(r.z2, r.chi6) + r.h6.nonresonant_part();
  REQUIRE(resid.empty());

  // reality closure of every output
  for (auto* P : {&r.z4, &r.k6, &r.z6_action, &r.chi4, &r.chi6}) REQUIRE(P->reality_closed());
}

TEST_CASE("truncation split and weight certificate", "[birkhoff]") {
  const int K = 6;
  auto r = desk_birkhoff_normal_form(K);
  Poly K6 = r.k6;

  SECTION("huge N keeps everything") {
    auto sp = truncate_resonant(K6, 1e6);
    REQUIRE(sp.rest.empty());
    REQUIRE(sp.certificate_ok);
  }

  SECTION("the spread sextic lands in the tail at N = 3, nu = 1/6") {
    Poly probe(3);
    auto j = make_tuple({{1, 0}, {1, 1}, {1, 5}, {-1, -1}, {-1, 3}, {-1, 4}});
    probe.add(j, Coeff(Rat(1)));
    auto sp = truncate_resonant(probe, 3.0, 1.0 / 6.0);
    REQUIRE(sp.kept.empty());
    REQUIRE(sp.rest.size() == 1);
  }

  SECTION("kept part passes the weight certificate at moderate N") {
    auto sp = truncate_resonant(K6, 12.0);
    REQUIRE(sp.certificate_ok);
    REQUIRE(!sp.kept.empty());
    REQUIRE(!sp.rest.empty());
    for (auto& [j, c] : sp.kept.coeffs()) {
      REQUIRE(j.mu(3) <= sp.nu * 12.0);
      REQUIRE(j.irreducible_part().mu1() <= 144.0);
    }
  }
}

TEST_CASE("bracket coefficient bound holds along the desk normal form", "[birkhoff]") {
  ModelParams mp{0.0, 1.0, 0.8, Model::NLS, -1};
  const int K = 4;
  auto z2 = z2_poly(K);
  auto x4 = chi4(K);
  auto b = poisson_poly(z2, x4);
  REQUIRE(b.coeff_sup(mp) <=
          2.0 * z2.half_degree() * x4.half_degree() * z2.coeff_sup(mp) * x4.coeff_sup(mp) + 1e-12);
}
