#include "rnf/rational_terms.hpp"

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace rnf;
using namespace rnf::testing;

namespace {
const ModelParams kP{0.0, 1.0, 0.4, Model::NLS, -1};

RationalHamiltonian monomial_term(const MultiIndex& pi, int K, Complex c = {1, 0}) {
  RationalHamiltonian H(K);
  RationalTerm t;
  t.c = c;
  t.pi = pi;
  H.terms.push_back(t);
  return H;
}
}  // namespace

TEST_CASE("bracket with Z4 multiplies by -i omega(Irr pi)", "[rational]") {
  const int K = 6;
  auto Z4 = RationalHamiltonian::from_poly(z4_poly(K), kP, K);
  auto pi = make_tuple({{1, 2}, {1, -1}, {1, -1}, {-1, -2}, {-1, 1}, {-1, 1}});
  auto M = monomial_term(pi, K, {0.7, -0.2});
  auto B = bracket(Z4, M, kP);
  Rng rng(4);
  auto fp = FreqParams<double>::from(kP, K);
  for (int t = 0; t < 10; ++t) {
    auto z = random_state(K, rng, 0.7);
    auto I = as_generic(actions_of(z));
    Complex expect = Complex{0, -1} * omega(pi.irreducible_part(), I, fp) * evaluate(M, z, kP);
    Complex got = evaluate(B, z, kP);
    REQUIRE(std::abs(got - expect) <= 1e-12 * std::max(1.0, std::abs(expect)));
  }
}

TEST_CASE("bracket with Z4+Z6 multiplies by -i Omega(Irr pi)", "[rational]") {
  const int K = 5;
  auto ZZ = RationalHamiltonian::from_poly(z4_poly(K), kP, K) +
            RationalHamiltonian::from_poly(z6_poly(K), kP, K);
  auto pi_core = make_tuple({{1, 2}, {1, -1}, {1, -1}, {-1, -2}, {-1, 1}, {-1, 1}});
  auto pi = with_action_pairs(pi_core, {3});
  auto M = monomial_term(pi, K, {1.0, 0.5});
  auto B = bracket(ZZ, M, kP);
  Rng rng(5);
  auto fp = FreqParams<double>::from(kP, K);
  for (int t = 0; t < 10; ++t) {
    auto z = random_state(K, rng, 0.7);
    auto I = as_generic(actions_of(z));
    Complex expect = Complex{0, -1} * omega_big(pi_core, I, fp) * evaluate(M, z, kP);
    Complex got = evaluate(B, z, kP);
    REQUIRE(std::abs(got - expect) <= 1e-11 * std::max(1.0, std::abs(expect)));
  }
}

TEST_CASE("bracket of a Hamiltonian with itself vanishes", "[rational]") {
  Rng rng(8);
  auto pool = small_mu_irr_pool(5);
  auto H = random_subclass_ham(rng, 3, SubclassTag::r_omega_star, 5, 2, pool);
  auto B = bracket(H, H, kP);
  Rng rng2(9);
  for (int t = 0; t < 5; ++t) {
    auto z = nonresonant_state(rng2, 5, kP, {&H});
    REQUIRE(std::abs(evaluate(B, z, kP)) < 1e-10);
  }
}

TEST_CASE("bracket antisymmetry", "[rational]") {
  Rng rng(12);
  auto pool = small_mu_irr_pool(5);
  auto A = random_subclass_ham(rng, 3, SubclassTag::r_omega_star, 5, 2, pool);
  auto B = random_subclass_ham(rng, 3, SubclassTag::r_omega, 5, 2, pool);
  auto AB = bracket(A, B, kP);
  auto BA = bracket(B, A, kP);
  Rng rng2(13);
  for (int t = 0; t < 5; ++t) {
    auto z = nonresonant_state(rng2, 5, kP, {&A, &B});
    Complex x = evaluate(AB, z, kP), y = evaluate(BA, z, kP);
    REQUIRE(std::abs(x + y) <= 1e-10 * std::max(1.0, std::abs(x)));
  }
}

TEST_CASE("symbolic bracket matches the numeric Poisson oracle", "[rational]") {
  Rng rng(21);
  auto pool = small_mu_irr_pool(5);
  for (auto W : {SubclassTag::r_omega, SubclassTag::r_Omega}) {
    int r = W == SubclassTag::r_omega ? 3 : 4;
    auto star = W == SubclassTag::r_omega ? SubclassTag::r_omega_star : SubclassTag::r_Omega_star;
    auto A = random_subclass_ham(rng, 3, star, 5, 2, pool);
    auto B = random_subclass_ham(rng, r, W, 5, 2, pool);
    auto AB = bracket(A, B, kP);
    REQUIRE(AB.order() == 3 + r - 1);
    RationalFunctional fa(A, kP), fb(B, kP);
    Rng rng2(23);
    for (int t = 0; t < 20; ++t) {
      auto z = nonresonant_state(rng2, 5, kP, {&A, &B});
      Complex sym = evaluate(AB, z, kP);
      Complex num = poisson_numeric(fa, fb, z);
      REQUIRE(std::abs(sym - num) <= 1e-9 * std::max(1.0, std::abs(sym)));
    }
  }
}

TEST_CASE("bracket outputs stay reality-closed and obey the weight bound", "[rational]") {
  Rng rng(31);
  auto pool = small_mu_irr_pool(5);
  auto A = random_subclass_ham(rng, 2, SubclassTag::r_Omega_star, 5, 2, pool);
  auto B = random_subclass_ham(rng, 4, SubclassTag::r_Omega, 5, 2, pool);
  auto AB = bracket(A, B, kP);
  REQUIRE(!AB.empty());
  REQUIRE(AB.is_reality_closed(1e-9));
  REQUIRE(AB.weight() <= std::max(A.weight(), B.weight()) + 1e-12);
}

TEST_CASE("bracket closure: subclass, order, alpha bookkeeping", "[rational]") {
  Rng rng(37);
  auto pool = small_mu_irr_pool(5);
  for (int trial = 0; trial < 10; ++trial) {
    bool omega_mode = trial % 2 == 0;
    int r = 2 + int(rng.next_u64() % 3);
    int rp = omega_mode ? 3 + int(rng.next_u64() % 2) : 4;
    auto A = random_subclass_ham(rng, r, omega_mode ? SubclassTag::r_omega_star : SubclassTag::r_Omega_star,
                                 5, 1 + int(rng.next_u64() % 2), pool);
    auto B = random_subclass_ham(rng, rp, omega_mode ? SubclassTag::r_omega : SubclassTag::r_Omega, 5,
                                 1 + int(rng.next_u64() % 2), pool);
    auto AB = bracket(A, B, kP);
    if (AB.empty()) continue;
    auto rep = subclass_check(AB, omega_mode ? SubclassTag::r_omega : SubclassTag::r_Omega);
    INFO(rep.violation);
    REQUIRE(rep.ok);
    REQUIRE(rep.r == r + rp - 1);
    // in Omega mode the stored alpha vectors are themselves valid witnesses
    if (!omega_mode)
      for (auto& t : AB.terms) {
        if (!t.alpha_valid) continue;
        REQUIRE(t.n() == t.alpha[0] + t.alpha[1]);
        REQUIRE(t.p() - t.n() == t.alpha[2]);
        REQUIRE(t.q() == t.alpha[3] + t.alpha[4]);
        REQUIRE(t.alpha[1] + t.alpha[2] + t.alpha[3] <= t.alpha[4]);
      }
  }
}

TEST_CASE("homological solve, Z4 mode (single polynomial term)", "[rational]") {
  const int K = 5;
  auto pi = make_tuple({{1, 2}, {1, -1}, {1, -1}, {-1, -2}, {-1, 1}, {-1, 1}});
  auto H = monomial_term(pi, K, {0.31, 0.11});
  auto chi = solve_homological(H, HomologicalMode::Z4);
  REQUIRE(chi.terms.size() == 1);
  REQUIRE(chi.terms[0].k_omega.size() == 1);
  REQUIRE(chi.terms[0].k_omega[0] == pi);

  auto rep = subclass_check(chi, SubclassTag::r_omega_star);
  INFO(rep.violation);
  REQUIRE(rep.ok);
  REQUIRE(rep.r == 2);

  auto Z4 = RationalHamiltonian::from_poly(z4_poly(K), kP, K);
  auto resid = bracket(Z4, chi, kP);
  Rng rng(41);
  for (int t = 0; t < 10; ++t) {
    auto z = nonresonant_state(rng, K, kP, {&chi});
    Complex lhs = evaluate(resid, z, kP), rhs = evaluate(H, z, kP);
    REQUIRE(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("homological solve, Z4+Z6 mode appends an eps^4 divisor", "[rational]") {
  const int K = 5;
  auto pool = small_mu_irr_pool(K);
  Rng rng(43);
  // an H_{4,Omega}-style octic: sextic core + one action pair
  auto core = pool[2];
  auto H = monomial_term(with_action_pairs(core, {2}), K, {0.2, -0.4});
  H.terms.push_back(H.terms[0].conjugated());
  H.merge();
  auto chi = solve_homological(H, HomologicalMode::Z4Z6);
  for (auto& t : chi.terms) {
    REQUIRE(t.q() == 1);
    REQUIRE(t.h_Omega[0] == t.pi.irreducible_part());
  }
  auto ZZ = RationalHamiltonian::from_poly(z4_poly(K), kP, K) +
            RationalHamiltonian::from_poly(z6_poly(K), kP, K);
  auto resid = bracket(ZZ, chi, kP);
  for (int t = 0; t < 10; ++t) {
    auto z = nonresonant_state(rng, K, kP, {&chi});
    Complex lhs = evaluate(resid, z, kP), rhs = evaluate(H, z, kP);
    REQUIRE(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("solver refuses action-only terms; A/R split recombines", "[rational]") {
  const int K = 4;
  auto act = monomial_term(with_action_pairs(MultiIndex{}, {0, 1, 2}), K);
  REQUIRE_THROWS_AS(solve_homological(act, HomologicalMode::Z4), std::invalid_argument);

  Rng rng(47);
  auto pool = small_mu_irr_pool(K);
  auto H = random_subclass_ham(rng, 4, SubclassTag::r_Omega, K, 2, pool);
  // add an action-only octic so the split is nontrivial
  auto extra = monomial_term(with_action_pairs(MultiIndex{}, {0, 1, 2, 3}), K, {0.3, 0});
  H = H + extra;
  auto [A, R] = split_action_irreducible(H);
  REQUIRE(!A.empty());
  REQUIRE(!R.empty());
  auto z = nonresonant_state(rng, K, kP, {&H});
  Complex whole = evaluate(H, z, kP);
  Complex parts = evaluate(A, z, kP) + evaluate(R, z, kP);
  REQUIRE(std::abs(whole - parts) <= 1e-13 * std::max(1.0, std::abs(whole)));
}

TEST_CASE("evaluation: action-only gradient matches the polynomial gradient", "[rational]") {
  const int K = 4;
  auto P = z4_poly(K);
  auto H = RationalHamiltonian::from_poly(P, kP, K);
  Rng rng(53);
  auto z = random_state(K, rng, 0.8);
  Gradient gr(K), gp(K);
  add_gradient(H, z, kP, gr);
  P.add_gradient(z, kP, gp);
  for (std::size_t i = 0; i < gr.dxi.size(); ++i) {
    REQUIRE(std::abs(gr.dxi[i] - gp.dxi[i]) < 1e-13);
    REQUIRE(std::abs(gr.deta[i] - gp.deta[i]) < 1e-13);
  }
}

TEST_CASE("evaluation: rational gradient matches finite differences", "[rational]") {
  const int K = 5;
  auto pi = make_tuple({{1, 2}, {1, -1}, {1, -1}, {-1, -2}, {-1, 1}, {-1, 1}});
  auto H = monomial_term(pi, K, {1.0, 0.0});
  auto& t0 = H.terms[0];
  t0.k_omega.push_back(pi);           // z_pi / omega
  t0.h_Omega.push_back(pi);           // ... / Omega as well
  RationalFunctional f(H, kP);
  Rng rng(59);
  for (int t = 0; t < 20; ++t) {
    auto z = nonresonant_state(rng, K, kP, {&H}, 0.6, 0.1);
    Gradient ga(K);
    REQUIRE(f.gradient(z, ga));
    Gradient gf = fd_gradient(f, z);
    for (std::size_t i = 0; i < ga.dxi.size(); ++i) {
      double scale = std::max(1.0, std::abs(ga.dxi[i]));
      REQUIRE(std::abs(ga.dxi[i] - gf.dxi[i]) <= 1e-7 * scale);
    }
  }
}

TEST_CASE("reality: evaluation of a reality-closed H is real on real states", "[rational]") {
  Rng rng(61);
  auto pool = small_mu_irr_pool(5);
  auto H = random_subclass_ham(rng, 3, SubclassTag::r_omega, 5, 3, pool);
  REQUIRE(H.is_reality_closed());
  for (int t = 0; t < 5; ++t) {
    auto z = nonresonant_state(rng, 5, kP, {&H});
    Complex v = evaluate(H, z, kP);
    REQUIRE(std::abs(v.imag()) <= 1e-10 * std::max(1.0, std::abs(v.real())));
  }
}

TEST_CASE("subclass examples from the construction", "[rational]") {
  const int K = 5;
  // a polynomial sextic term: p = q = n = 0, m = 3 -> H_{3,omega}
  auto pi = make_tuple({{1, 2}, {1, -1}, {1, -1}, {-1, -2}, {-1, 1}, {-1, 1}});
  auto K6 = monomial_term(pi, K);
  auto rep = subclass_check(K6);
  REQUIRE(rep.ok);
  REQUIRE(rep.tag == SubclassTag::r_omega);
  REQUIRE(rep.r == 3);

  // its Z4 solve: n = p = 1, q = 0, m = 3 -> H*_{2,omega}
  auto chi = solve_homological(K6, HomologicalMode::Z4);
  auto rep2 = subclass_check(chi);
  REQUIRE(rep2.ok);
  REQUIRE((rep2.tag == SubclassTag::r_omega_star && rep2.r == 2));

  // an H_{4,Omega} term solved with Z4+Z6 lands in H*_{2,Omega}
  auto H8 = monomial_term(with_action_pairs(pi, {1}), K);
  auto rep3 = subclass_check(H8, SubclassTag::r_Omega);
  REQUIRE(rep3.ok);
  REQUIRE(rep3.r == 4);
  auto chi8 = solve_homological(H8, HomologicalMode::Z4Z6);
  auto rep4 = subclass_check(chi8, SubclassTag::r_Omega_star);
  INFO(rep4.violation);
  REQUIRE(rep4.ok);
  REQUIRE(rep4.r == 2);
}

TEST_CASE("derivative distribution certificate", "[rational]") {
  const int K = 5;
  auto pi = make_tuple({{1, 2}, {1, -1}, {1, -1}, {-1, -2}, {-1, 1}, {-1, 1}});
  auto chi = solve_homological(monomial_term(pi, K), HomologicalMode::Z4);
  // mu_min of the divisor is <1>; positions 3..6 of pi all have gauge >= <1>,
  // so C = 1 suffices
  auto cert = distribute_derivatives_certificate(chi, 1.0);
  INFO(cert.failure);
  REQUIRE(cert.ok);
  REQUIRE(cert.iota.size() == 1);
  REQUIRE(cert.iota[0].size() == 2);

  // hand-built violating term: divisor with huge mu_min over a tiny numerator
  RationalHamiltonian bad(40);
  RationalTerm t;
  t.pi = make_tuple({{1, 2}, {1, -1}, {1, -1}, {-1, -2}, {-1, 1}, {-1, 1}});
  REQUIRE(t.pi.classify() == ClassTag::R);
  t.c = {1, 0};
  t.k_omega.push_back(make_tuple({{1, 38}, {1, 35}, {1, 35}, {-1, 34}, {-1, 37}, {-1, 37}}));
  REQUIRE(t.k_omega[0].classify() == ClassTag::R);
  REQUIRE(t.k_omega[0].is_irreducible());
  bad.terms.push_back(t);
  auto cert2 = distribute_derivatives_certificate(bad, 6.0);
  REQUIRE(!cert2.ok);
}

TEST_CASE("denominator floor raises with the offending index", "[rational]") {
  const int K = 4;
  auto pi = make_tuple({{1, 2}, {1, -1}, {1, -1}, {-1, -2}, {-1, 1}, {-1, 1}});
  auto H = monomial_term(pi, K);
  auto chi = solve_homological(H, HomologicalMode::Z4);
  FourierState z(K);  // equal actions: omega vanishes identically
  for (int a = -K; a <= K; ++a) z.set_mode(a, {0.1, 0.0});
  DenominatorFloor floor;
  floor.enabled = true;
  REQUIRE_THROWS_AS(evaluate(chi, z, kP, floor), DenominatorFloorError);
}
