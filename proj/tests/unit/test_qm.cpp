#include "fqft/errors.hpp"
#include "fqft/qm.hpp"

#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

using namespace fqft;

namespace {

double rel(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

Matrix random_matrix(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> d(0, 1.0 / std::sqrt(n));
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = d(rng);
  return m;
}

Matrix exp_neg(const Matrix& h, double t) { return Matrix((-t * h).exp()); }

}  // namespace

TEST_SUITE("qm") {
  TEST_CASE("evolution of diag(0, 1)") {
    Matrix h = Matrix::Zero(2, 2);
    h(1, 1) = 1;
    const QmTheory theory(h);
    const auto pf = evolve(theory, 0.25, 1.75);
    CHECK(pf.value(0, 0) == doctest::Approx(1.0));
    CHECK(pf.value(1, 1) == doctest::Approx(std::exp(-1.5)));
    CHECK(pf.value(0, 1) == 0.0);
    CHECK(rel(evolve(theory, 0.3, 0.3).value, Matrix::Identity(2, 2)) == 0.0);
  }

  TEST_CASE("evolution is a semigroup") {
    std::mt19937_64 rng(41);
    for (int n = 1; n <= 5; ++n) {
      const QmTheory theory(random_matrix(rng, n));
      const Matrix glued = evolve(theory, 0.4, 1.3).value * evolve(theory, -0.2, 0.4).value;
      CHECK(rel(glued, evolve(theory, -0.2, 1.3).value) < 1e-13);
    }
  }

  TEST_CASE("contracts") {
    CHECK_THROWS_AS(QmTheory(Matrix(2, 3)), ContractViolation);
    CHECK_THROWS_AS(QmTheory(Matrix(0, 0)), ContractViolation);
    const QmTheory theory(Matrix::Identity(2, 2));
    CHECK_THROWS_AS(evolve(theory, 1, 0), ContractViolation);
    const Matrix o = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(qm_correlator(theory, {{o, 0.2}, {o, 0.5}}, 0, 1), ContractViolation);
    CHECK_THROWS_AS(qm_correlator(theory, {{o, 1.5}}, 0, 1), ContractViolation);
    CHECK_THROWS_AS(segment_integral(theory, Matrix::Identity(3, 3), 1), ContractViolation);
    CHECK_THROWS_AS(qm_deform(theory, {{"O", o}, {"O", o}}, 0, 1), ContractViolation);
    CHECK_THROWS_AS(random_instance(1, 0), ContractViolation);
    Matrix bad = Matrix::Identity(2, 2);
    bad(0, 1) = std::nan("");
    CHECK_THROWS(QmTheory{bad});
  }

  TEST_CASE("with H = 0 the correlator is the ordered operator product") {
    std::mt19937_64 rng(42);
    const QmTheory theory(Matrix::Zero(3, 3));
    const Matrix a = random_matrix(rng, 3), b = random_matrix(rng, 3), c = random_matrix(rng, 3);
    CHECK(rel(qm_correlator(theory, {{a, 0.9}, {b, 0.5}, {c, 0.1}}, 0, 1), a * b * c) < 1e-14);
    CHECK(rel(qm_correlator(theory, {{a, 1.0}, {b, 0.0}}, 0, 1), a * b) < 1e-14);
  }

  TEST_CASE("time ordering is symmetric and symmetrizes coincident insertions") {
    std::mt19937_64 rng(43);
    const QmTheory theory(random_matrix(rng, 3));
    const Matrix a = random_matrix(rng, 3), b = random_matrix(rng, 3);
    const auto ab = time_ordered(theory, {a, 0.7}, {b, 0.2}, 0, 1);
    const auto ba = time_ordered(theory, {b, 0.2}, {a, 0.7}, 0, 1);
    CHECK_FALSE(ab.coincident);
    CHECK(rel(ab.value, ba.value) == 0.0);
    const Matrix h = theory.hamiltonian();
    CHECK(rel(ab.value, exp_neg(h, 0.3) * a * exp_neg(h, 0.5) * b * exp_neg(h, 0.2)) < 1e-13);

    const auto same = time_ordered(theory, {a, 0.4}, {b, 0.4}, 0, 1);
    CHECK(same.coincident);
    CHECK(rel(same.value, exp_neg(h, 0.6) * (0.5 * (a * b + b * a)) * exp_neg(h, 0.4)) < 1e-13);
    CHECK_THROWS_AS(time_ordered(theory, {a, 0.4}, {b, 0.4}, 0, 1, CoincidentPolicy::reject), ContractViolation);
  }

  TEST_CASE("diagonal Hamiltonian segment integral in closed form") {
    const Eigen::Vector3d lam(0.3, -0.7, 1.9);
    const QmTheory theory(Matrix(lam.asDiagonal()));
    std::mt19937_64 rng(44);
    const Matrix a = random_matrix(rng, 3);
    const double T = 1.3;
    Matrix expected(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        expected(i, j) = a(i, j) * (i == j ? T * std::exp(-T * lam(i))
                                           : (std::exp(-T * lam(j)) - std::exp(-T * lam(i))) / (lam(i) - lam(j)));
    CHECK(rel(segment_integral(theory, a, T), expected) < 1e-13);
  }

  TEST_CASE("nearly degenerate spectrum stays accurate") {
    Matrix h = Matrix::Zero(2, 2);
    h(0, 0) = 1;
    h(1, 1) = 1 + 1e-9;
    const QmTheory theory(h);
    Matrix a = Matrix::Ones(2, 2);
    const auto got = segment_integral(theory, a, 2.0);
    CHECK(got(0, 1) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-8));
    CHECK(rel(got, -exponential_taylor(h, a, 2.0, 1)[1]) < 1e-12);
  }

  TEST_CASE("eigen and quadrature paths agree; defective H falls back to quadrature") {
    std::mt19937_64 rng(45);
    QmOptions eigen{IntegralMethod::eigen}, quad{IntegralMethod::quadrature};
    for (int n = 1; n <= 4; ++n) {
      const QmTheory theory(random_matrix(rng, n));
      const Matrix a = random_matrix(rng, n), b = random_matrix(rng, n);
      CHECK(rel(segment_integral(theory, a, 0.8, eigen), segment_integral(theory, a, 0.8, quad)) < 1e-12);
      CHECK(rel(ordered_double_integral(theory, a, b, 0.8, eigen), ordered_double_integral(theory, a, b, 0.8, quad)) <
            1e-11);
    }
    Matrix jordan = Matrix::Identity(2, 2);
    jordan(0, 1) = 1;
    const QmTheory defective(jordan);
    const Matrix a = random_matrix(rng, 2);
    CHECK(rel(segment_integral(defective, a, 1.1), -exponential_taylor(jordan, a, 1.1, 1)[1]) < 1e-12);
    CHECK(rel(ordered_double_integral(defective, a, a, 1.1), exponential_taylor(jordan, a, 1.1, 2)[2]) < 1e-12);
  }

  TEST_CASE("Taylor coefficients of the exponential match finite differences") {
    std::mt19937_64 rng(46);
    const Matrix h = random_matrix(rng, 3), o = random_matrix(rng, 3);
    const double T = 0.9, eps = 1e-4;
    const auto tay = exponential_taylor(h, o, T, 2);
    CHECK(rel(tay[0], exp_neg(h, T)) < 1e-14);
    const Matrix plus = exp_neg(h + eps * o, T), minus = exp_neg(h - eps * o, T), mid = exp_neg(h, T);
    CHECK(rel(tay[1], (plus - minus) / (2 * eps)) < 1e-7);
    CHECK(rel(tay[2], (plus - 2 * mid + minus) / (2 * eps * eps)) < 1e-6);
  }

  TEST_CASE("first-order deformation is the first Taylor coefficient of e^{-T(H - gO)}") {
    std::mt19937_64 rng(47);
    const Matrix h = random_matrix(rng, 4), o = random_matrix(rng, 4);
    const auto jet = qm_deform(QmTheory(h), {{"O", o}}, -0.3, 0.8);
    CHECK(rel(*jet.find({}), exp_neg(h, 1.1)) < 1e-13);
    CHECK(rel(*jet.find({g_symbol("O")}), exponential_taylor(h, -o, 1.1, 1)[1]) < 1e-12);
  }

  TEST_CASE("the bilinear term integrates the time-ordered correlator over the square") {
    std::mt19937_64 rng(48);
    const QmTheory theory(random_matrix(rng, 2));
    const Matrix a = random_matrix(rng, 2), b = random_matrix(rng, 2);
    const double alpha = 0.1, beta = 0.9;
    const auto dd = qm_double_deform(theory, {{"a", a}, {"b", b}}, alpha, beta);
    // Midpoint rule on the square; the kink on the diagonal costs only O(h^2).
    const int n = 100;
    const double h = (beta - alpha) / n;
    Matrix numeric = Matrix::Zero(2, 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        numeric += time_ordered(theory, {b, alpha + (i + 0.5) * h}, {a, alpha + (j + 0.5) * h}, alpha, beta).value;
    numeric *= h * h;
    const auto* coeff = dd.before_recombination.find({gt_symbol("b"), g_symbol("a")});
    REQUIRE(coeff);
    CHECK(rel(*coeff, numeric) < 1e-3);
    CHECK(rel(*dd.pf.find({gc_symbol("a"), gc_symbol("b")}), *coeff) < 1e-15);
  }

  TEST_CASE("oracle and cutting agree to working precision on random instances") {
    for (int i = 0; i < 24; ++i) {
      const int dim = 1 + i % 6;
      const auto inst = random_instance(1000 + i, dim);
      CHECK(inst.alpha < inst.split);
      CHECK(inst.split < inst.beta);
      const auto res = qm_oracle_check(inst, 2);
      CHECK(res.dim == dim);
      CHECK(res.max_order_error() < 1e-10);
      CHECK(res.max_cutting_error() < 1e-12);
    }
  }

  TEST_CASE("random instances are reproducible from the seed") {
    const auto a = random_instance(7, 3), b = random_instance(7, 3), c = random_instance(8, 3);
    CHECK(a.h == b.h);
    CHECK(a.o == b.o);
    CHECK(a.split == b.split);
    CHECK_FALSE(a.h == c.h);
  }
}
