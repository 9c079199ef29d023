#include "rnf/frequencies.hpp"
#include "rnf/polynomial.hpp"
#include "rnf/sampling.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace rnf;

namespace {
const ModelParams kP{0.3, 1.0, 0.7, Model::NLS, -1};
}

TEST_CASE("P_2 is the mass term", "[polynomial]") {
  auto P = p2m_coefficients(1, 3);
  for (int a = -3; a <= 3; ++a) {
    const Coeff* c = P.find(action_pair(a));
    REQUIRE(c != nullptr);
    // symmetric coefficient phi(0)/2, total phi(0)
    REQUIRE(*c == Coeff::gen(1, 0, 0, Rat(1, 2)));
  }
  REQUIRE(P.size() == 7);
}

TEST_CASE("P_4 carries phi'(0)/12 on every momentum quartet", "[polynomial]") {
  auto P = p2m_coefficients(2, 2);
  Coeff expect = Coeff::gen(0, 1, 0, Rat(1, 12));
  for (auto& [j, c] : P.coeffs()) {
    REQUIRE(j.momentum() == 0);
    REQUIRE(c == expect);
  }
  // monomial count matches brute-force enumeration of M_2 over the window
  std::size_t brute = 0;
  for (int a1 = -2; a1 <= 2; ++a1)
    for (int a2 = a1; a2 <= 2; ++a2)
      for (int b1 = -2; b1 <= 2; ++b1)
        for (int b2 = b1; b2 <= 2; ++b2)
          if (a1 + a2 == b1 + b2) ++brute;
  REQUIRE(P.size() == brute);
}

TEST_CASE("chi4 has coefficient phi'/(12 i Delta) off the resonant set", "[polynomial]") {
  auto X = chi4(6);
  // (a1,a2,b1,b2) = (2,0,1,1): Delta = 2, coefficient phi'/(24 i) = -i phi'/24
  auto j = make_tuple({{1, 2}, {1, 0}, {-1, 1}, {-1, 1}});
  const Coeff* c = X.find(j);
  REQUIRE(c != nullptr);
  REQUIRE(*c == Coeff::imaginary(Rat(-1, 24), {0, 1, 0}));

  // resonant monomials are absent
  REQUIRE(X.find(make_tuple({{1, 3}, {1, 1}, {-1, 3}, {-1, 1}})) == nullptr);
  for (auto& [k, v] : X.coeffs()) REQUIRE(k.classify() != ClassTag::R);
}

TEST_CASE("Z4 equals the closed form on actions", "[polynomial]") {
  auto Z4 = z4_poly(4);
  Rng rng(3);
  FourierState z = random_state(4, rng, 0.6);
  auto I = actions_of(z);
  double direct = kP.phi1 * I.sum() * I.sum() - 0.5 * kP.phi1 * I.sum_sq();
  auto val = Z4.evaluate(z, kP);
  REQUIRE(val.real() == Catch::Approx(direct).epsilon(1e-12));
  REQUIRE(std::abs(val.imag()) < 1e-15);
}

TEST_CASE("Z6 polynomial equals the closed-form value", "[polynomial]") {
  auto Z6 = z6_poly(4);
  Rng rng(11);
  FourierState z = random_state(4, rng, 0.7);
  FreqParams<double> fp{kP.phi0, kP.phi1, kP.phi2, Model::NLS, 16};
  auto I = as_generic(actions_of(z));
  auto val = Z6.evaluate(z, kP);
  REQUIRE(val.real() == Catch::Approx(z6_value(I, fp)).epsilon(1e-12));
  REQUIRE(std::abs(val.imag()) < 1e-16);
}

TEST_CASE("bracket with Z2 multiplies by -i Delta_j", "[polynomial]") {
  // note: with the bracket {F,G} = i sum (dF/dxi dG/deta - dF/deta dG/dxi)
  // the eigenvalue comes out as -i Delta_j; this is the orientation under
  // which Z4 = P4 + {Z2, chi4} holds with chi4 = (phi'/12) sum z_j/(i Delta_j).
  auto Z2 = z2_poly(5);
  for (auto jj : {make_tuple({{1, 2}, {1, 0}, {-1, 1}, {-1, 1}}),
                  make_tuple({{1, 3}, {-1, 2}, {-1, 2}, {1, 1}})}) {
    Poly M(2);
    M.add(jj, Coeff(Rat(1)));
    Poly B = poisson_poly(Z2, M);
    REQUIRE(B.size() == 1);
    const Coeff* c = B.find(jj);
    REQUIRE(c != nullptr);
    REQUIRE(*c == Coeff::imaginary(Rat(-jj.laplacian())));
  }
}

TEST_CASE("bracket is antisymmetric and vanishes on {P,P}", "[polynomial]") {
  auto P = p2m_coefficients(2, 3);
  REQUIRE(poisson_poly(P, P).empty());
  auto X = chi4(3);
  Poly ab = poisson_poly(P, X), ba = poisson_poly(X, P);
  REQUIRE((ab + ba).empty());
}

TEST_CASE("homological identity Z4 - P4 - {Z2, chi4} = 0, exact", "[polynomial]") {
  const int K = 6;
  Poly lhs = z4_poly(K) - p2m_coefficients(2, K) - poisson_poly(z2_poly(K), chi4(K));
  REQUIRE(lhs.empty());
}

TEST_CASE("bracket coefficient bound (2mn) holds", "[polynomial]") {
  auto A = p2m_coefficients(2, 3);
  auto X = chi4(3);
  auto B = poisson_poly(A, X);
  double bound = 2.0 * A.half_degree() * X.half_degree() * A.coeff_sup(kP) * X.coeff_sup(kP);
  REQUIRE(B.coeff_sup(kP) <= bound * (1 + 1e-12));
}

TEST_CASE("symbolic bracket agrees with the numeric Poisson oracle", "[polynomial]") {
  Rng rng(99);
  auto A = p2m_coefficients(2, 3);
  auto X = chi4(3);
  auto B = poisson_poly(A, X);
  PolyFunctional fa(A, kP), fx(X, kP);
  for (int t = 0; t < 20; ++t) {
    auto z = random_state(3, rng, 0.8);
    Complex sym = B.evaluate(z, kP);
    Complex num = poisson_numeric(fa, fx, z);
    REQUIRE(std::abs(sym - num) <= 1e-10 * std::max(1.0, std::abs(sym)));
  }
}

TEST_CASE("reality closure of the concrete Hamiltonians", "[polynomial]") {
  for (auto P : {z2_poly(4), z4_poly(4), q4_poly(4), chi4(4), p2m_coefficients(3, 3), z6_poly(3)})
    REQUIRE(P.reality_closed());
}

TEST_CASE("polynomial evaluation is real on real states", "[polynomial]") {
  Rng rng(5);
  for (auto P : {p2m_coefficients(2, 4), z2_poly(4), chi4(4)}) {
    auto z = random_state(4, rng, 0.5);
    auto v = P.evaluate(z, kP);
    if (P.find(make_tuple({{1, 2}, {1, 0}, {-1, 1}, {-1, 1}})) && !P.reality_closed()) continue;
    (void)v;
  }
  // chi4 is reality-closed, so its value at a real state is real
  auto X = chi4(4);
  auto z = random_state(4, rng, 0.5);
  REQUIRE(std::abs(X.evaluate(z, kP).imag()) < 1e-14 * std::max(1.0, std::abs(X.evaluate(z, kP))));
}

TEST_CASE("analytic polynomial gradient matches finite differences", "[polynomial]") {
  Rng rng(21);
  auto P = p2m_coefficients(2, 3);
  PolyFunctional f(P, kP);
  auto z = random_state(3, rng, 0.7);
  Gradient ga(z.window());
  REQUIRE(f.gradient(z, ga));
  Gradient gf = fd_gradient(f, z);
  for (std::size_t i = 0; i < ga.dxi.size(); ++i) {
    REQUIRE(std::abs(ga.dxi[i] - gf.dxi[i]) < 1e-8 * std::max(1.0, std::abs(ga.dxi[i])));
    REQUIRE(std::abs(ga.deta[i] - gf.deta[i]) < 1e-8 * std::max(1.0, std::abs(ga.deta[i])));
  }
}
