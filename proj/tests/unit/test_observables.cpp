#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hysim/dynamics.hpp"
#include "hysim/observables.hpp"
#include "oracles.hpp"

using namespace hysim;
using namespace hysim::testing;

TEST_CASE("quadratic form of the identity is the normalization constraint") {
  const auto form = quadratic_form(HermitianOperator::identity(2));
  const Dims d{0, 2};
  std::vector<double> at{1.0, -0.5, 0.25, 2.0};
  double expected = 0.0;
  for (double c : at) expected += 0.5 * c * c;
  CHECK(form.eval(at) == doctest::Approx(expected));
  CHECK(classify(form).phase_class == PhaseClass::QmQuadratic);
}

TEST_CASE("quadratic form of sigma_z splits the two modes") {
  const auto form = quadratic_form(HermitianOperator::pauli_z());
  // (X1^2 + P1^2)/2 - (X2^2 + P2^2)/2
  CHECK(form.eval(std::vector<double>{1, 1, 0, 0}) == doctest::Approx(1.0));
  CHECK(form.eval(std::vector<double>{0, 0, 1, 1}) == doctest::Approx(-1.0));
  CHECK(form.term_count() == 4);
}

TEST_CASE("quadratic form of a diagonal operator matches the energy sum") {
  const auto form = quadratic_form(HermitianOperator::diagonal({0.5, 1.5, 2.5}));
  Prng rng(3);
  const auto at = random_point(rng, 6);
  double expected = 0.0;
  const std::vector<double> e{0.5, 1.5, 2.5};
  for (int i = 0; i < 3; ++i) {
    expected += 0.5 * e[i] * (at[2 * i] * at[2 * i] + at[2 * i + 1] * at[2 * i + 1]);
  }
  CHECK(form.eval(at) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("quadratic form evaluates to the operator expectation") {
  Prng rng(41);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);
    const HermitianOperator g(random_hermitian(rng, n));
    const auto psi = random_state(rng, n);
    const auto form = quadratic_form(g);
    CHECK(form.eval(expand_state(psi).coords) ==
          doctest::Approx(g.expectation(psi)).epsilon(1e-12));
  }
}

TEST_CASE("non-Hermitian matrices are rejected") {
  Eigen::MatrixXcd bad(2, 2);
  bad << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(HermitianOperator{bad}, InvariantError);
  // small asymmetries below the tolerance are symmetrized away
  Eigen::MatrixXcd nearly(2, 2);
  nearly << 1.0, std::complex<double>(0.5, 1e-14), std::complex<double>(0.5, -1e-14 + 1e-15),
      -1.0;
  CHECK_NOTHROW(HermitianOperator{nearly});
}

TEST_CASE("operator reconstruction inverts the quadratic form") {
  Prng rng(43);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 5);
    const Eigen::MatrixXcd g = random_hermitian(rng, n);
    const HermitianOperator op(g);
    const HermitianOperator back = operator_from_quadratic_form(quadratic_form(op));
    CHECK((back.matrix() - op.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  // not a quadratic form: X1 P1 has no Hermitian counterpart
  const Dims d{0, 1};
  const auto bad = Polynomial<double>::variable(d, 0) * Polynomial<double>::variable(d, 1);
  CHECK_THROWS_AS(operator_from_quadratic_form(bad), InvariantError);
}

TEST_CASE("commutator expectation: frozen two-level examples") {
  const auto sx = HermitianOperator::pauli_x();
  const auto sy = HermitianOperator::pauli_y();
  const StateVector up{{1.0, 0.0}, {0.0, 0.0}};
  CHECK(commutator_expectation(sx, sx, up) == doctest::Approx(0.0));
  // (1/i)[sx, sy] = 2 sz and <up|sz|up> = 1
  CHECK(commutator_expectation(sx, sy, up) == doctest::Approx(2.0));
}

TEST_CASE("commutator expectation equals the quantum bracket of the forms") {
  Prng rng(47);
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);
    const HermitianOperator f(random_hermitian(rng, n));
    const HermitianOperator g(random_hermitian(rng, n));
    const auto psi = random_state(rng, n);
    const auto bracket = qm_bracket(quadratic_form(f), quadratic_form(g));
    const double symbolic = bracket.eval(expand_state(psi).coords);
    CHECK(symbolic == doctest::Approx(commutator_expectation(f, g, psi)).epsilon(1e-11));
  }
}

TEST_CASE("sigma_x and sigma_y brackets close on sigma_z") {
  const auto fx = quadratic_form(HermitianOperator::pauli_x());
  const auto fy = quadratic_form(HermitianOperator::pauli_y());
  const auto fz = quadratic_form(HermitianOperator::pauli_z());
  const auto lhs = qm_bracket(fx, fy);
  const auto rhs = fz * 2.0;
  CHECK((lhs - rhs).pruned(1e-14).is_zero());
}

TEST_CASE("the constraint commutes with every quadratic form") {
  Prng rng(53);
  const auto constraint = quadratic_form(HermitianOperator::identity(4));
  for (int rep = 0; rep < 20; ++rep) {
    const HermitianOperator g(random_hermitian(rng, 4));
    CHECK(qm_bracket(constraint, quadratic_form(g)).pruned(1e-13).is_zero());
  }
}

TEST_CASE("the constraint commutes with every phase-invariant polynomial") {
  Prng rng(59);
  const Dims d{0, 3};
  Polynomial<Rational> constraint(d);
  for (int i = 0; i < d.n_qm; ++i) {
    const auto x = Polynomial<Rational>::variable(d, qm_x(d, i));
    const auto p = Polynomial<Rational>::variable(d, qm_p(d, i));
    constraint += (x * x + p * p) * rational(1, 2);
  }
  for (int rep = 0; rep < 20; ++rep) {
    auto g = random_balanced_quadratic(rng, d);
    g = g * g + g * rational(2, 3);  // higher-degree balanced polynomial
    REQUIRE(classify(g).phase_class != PhaseClass::GeneralClassical);
    CHECK(qm_bracket(constraint, g).is_zero());
  }
}

TEST_CASE("classifier sector tags and phase classes") {
  const Dims d{1, 2};
  const auto x = Polynomial<Rational>::variable(d, cl_x(d, 0));
  const auto X1 = Polynomial<Rational>::variable(d, qm_x(d, 0));
  const auto P1 = Polynomial<Rational>::variable(d, qm_p(d, 0));
  const auto X2 = Polynomial<Rational>::variable(d, qm_x(d, 1));
  const auto P2 = Polynomial<Rational>::variable(d, qm_p(d, 1));

  const auto sz_form = (X1 * X1 + P1 * P1 - X2 * X2 - P2 * P2) * rational(1, 2);
  auto cls = classify(sz_form);
  CHECK(cls.phase_class == PhaseClass::QmQuadratic);
  CHECK(cls.belongs_qm);
  CHECK_FALSE(cls.belongs_cl);

  // squared quadratic form: balanced but degree 4
  cls = classify(sz_form * sz_form);
  CHECK(cls.phase_class == PhaseClass::AlmostClassical);
  CHECK(cls.qm_degree == 4);

  // linear in X: not phase invariant
  cls = classify(X1);
  CHECK(cls.phase_class == PhaseClass::GeneralClassical);

  // X1 P1 alone is unbalanced even though it is quadratic
  CHECK(classify(X1 * P1).phase_class == PhaseClass::GeneralClassical);

  // classical-only polynomial
  cls = classify(x * x);
  CHECK(cls.belongs_cl);
  CHECK_FALSE(cls.belongs_qm);
  CHECK(cls.phase_class == PhaseClass::AlmostClassical);  // trivially invariant, degree != 2

  // hybrid with non-constant classical coefficient is not strictly quadratic
  cls = classify(x * sz_form);
  CHECK(cls.hybrid());
  CHECK(cls.phase_class == PhaseClass::AlmostClassical);

  // zero polynomial: every class, both sectors
  cls = classify(Polynomial<Rational>(d));
  CHECK(cls.phase_class == PhaseClass::QmQuadratic);
  CHECK(cls.belongs_cl);
  CHECK(cls.belongs_qm);
}

TEST_CASE("classifier subset chain on random quadratic forms") {
  Prng rng(61);
  for (int rep = 0; rep < 30; ++rep) {
    const Dims d{0, 1 + static_cast<int>(rng.next_u64() % 3)};
    const auto q = random_balanced_quadratic(rng, d);
    const auto cls = classify(q);
    CHECK(cls.phase_class != PhaseClass::GeneralClassical);
    if (!q.is_zero()) {
      CHECK(cls.phase_class == PhaseClass::QmQuadratic);
      // squaring keeps balance but leaves the strict quadratic class
      CHECK(classify(q * q).phase_class != PhaseClass::GeneralClassical);
    }
  }
}

TEST_CASE("phase invariance decision agrees with numerical rotation") {
  Prng rng(67);
  const Dims d{1, 2};
  for (int rep = 0; rep < 40; ++rep) {
    const auto poly = to_double(random_rational_poly(rng, d, 4, 6));
    const bool balanced = classify(poly).phase_class != PhaseClass::GeneralClassical;
    // numeric oracle: evaluate at rotated points
    double max_dev = 0.0;
    for (int trial = 0; trial < 8; ++trial) {
      std::vector<double> at = random_point(rng, d.total_coords());
      const double theta = rng.uniform(0.0, 6.28);
      const QuantumPhasePoint q(2, {at[2], at[3], at[4], at[5]});
      const auto rotated = phase_rotate(q, theta);
      std::vector<double> at2 = at;
      for (int i = 0; i < 4; ++i) at2[2 + i] = rotated.coords[i];
      max_dev = std::max(max_dev, std::abs(poly.eval(at2) - poly.eval(at)));
    }
    if (balanced) {
      CHECK(max_dev <= 1e-10);
    } else {
      CHECK(max_dev > 1e-10);
    }
  }
}

TEST_CASE("infinitesimal canonical transform matches the unitary to second order") {
  Prng rng(71);
  const int n = 3;
  const HermitianOperator g(random_hermitian(rng, n));
  const auto psi = random_state(rng, n);
  const auto point = expand_state(psi);

  const auto same = infinitesimal_canonical_transform(point, g, 0.0);
  CHECK(same.coords == point.coords);

  // the defect after one step of size da shrinks like da^2
  double prev_ratio = 0.0;
  for (const double da : {1e-2, 1e-3, 1e-4}) {
    const auto moved = infinitesimal_canonical_transform(point, g, da);
    const auto exact = expand_state(schrodinger_oracle(psi, g, da));
    double defect = 0.0;
    for (int i = 0; i < 2 * n; ++i) defect = std::max(defect, std::abs(moved.coords[i] - exact.coords[i]));
    const double ratio = defect / (da * da);
    if (prev_ratio > 0.0) CHECK(ratio == doctest::Approx(prev_ratio).epsilon(0.2));
    prev_ratio = ratio;
  }
}

TEST_CASE("identity generator produces a pure phase rotation") {
  Prng rng(73);
  const auto psi = random_state(rng, 2);
  const auto point = expand_state(psi);
  const double da = 1e-5;
  const auto moved = infinitesimal_canonical_transform(point, HermitianOperator::identity(2), da);
  const auto rotated = phase_rotate(point, -da);  // exp(-i 1 da) shifts the phase by -da
  for (int i = 0; i < 4; ++i) {
    CHECK(moved.coords[i] == doctest::Approx(rotated.coords[i]).epsilon(1e-9));
  }
}
