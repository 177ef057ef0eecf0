#pragma once

#include "fqft/jet.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace fqft {

using Matrix = Eigen::MatrixXd;

template <>
struct CoefficientTraits<Matrix> {
  static bool zero(const Matrix& t) { return t.size() == 0 || t.isZero(0.0); }
  static Matrix scale(const Matrix& t, const Rational& q) { return q.get_d() * t; }
  static bool equal(const Matrix& a, const Matrix& b, double tol) {
    return (a - b).norm() <= tol * std::max({1.0, a.norm(), b.norm()});
  }
  static std::string format(const Matrix& t);
};

class QmTheory {
 public:
  explicit QmTheory(Matrix hamiltonian);
  int dim() const { return static_cast<int>(h_.rows()); }
  const Matrix& hamiltonian() const { return h_; }

 private:
  Matrix h_;
};

struct QmObservable {
  std::string label;
  Matrix op;
};

struct SegmentPF {
  double alpha = 0, beta = 0;
  Matrix value;
};

// e^{-(β-α)H}.
SegmentPF evolve(const QmTheory& theory, double alpha, double beta);

struct Insertion {
  Matrix op;
  double time;
};

// e^{-(β-τ₁)H} O₁ e^{-(τ₁-τ₂)H} O₂ ⋯ O_k e^{-(τ_k-α)H}, for τ₁ > ⋯ > τ_k.
Matrix qm_correlator(const QmTheory& theory, const std::vector<Insertion>& insertions, double alpha, double beta);

enum class CoincidentPolicy { symmetrize, reject };

struct TimeOrderedValue {
  Matrix value;
  bool coincident = false;
};

TimeOrderedValue time_ordered(const QmTheory& theory, const Insertion& a, const Insertion& b, double alpha,
                              double beta, CoincidentPolicy policy = CoincidentPolicy::symmetrize);

enum class IntegralMethod { automatic, eigen, quadrature };

struct QmOptions {
  IntegralMethod method = IntegralMethod::automatic;
  double max_condition = 1e6;        // eigenvector conditioning above which quadrature is used
  double quadrature_tolerance = 1e-13;
};

// ∫_0^T e^{-(T-s)H} A e^{-sH} ds.
Matrix segment_integral(const QmTheory& theory, const Matrix& a, double length, const QmOptions& opts = {});
// ∫_{T>s>u>0} e^{-(T-s)H} A e^{-(s-u)H} B e^{-uH}.
Matrix ordered_double_integral(const QmTheory& theory, const Matrix& a, const Matrix& b, double length,
                               const QmOptions& opts = {});

// pf + g^a ∫ O_a over first-order couplings g.
Jet<Matrix> qm_deform(const QmTheory& theory, const std::vector<QmObservable>& family, double alpha, double beta,
                      const QmOptions& opts = {});

struct QmDoubleDeformation {
  Jet<Matrix> before_recombination;  // in g, g̃
  Jet<Matrix> pf;                    // in g_c
};

QmDoubleDeformation qm_double_deform(const QmTheory& theory, const std::vector<QmObservable>& family, double alpha,
                                     double beta, const QmOptions& opts = {});

// Taylor coefficients of e^{-T(H+gO)} in g up to `order`, from a block-Toeplitz exponential.
std::vector<Matrix> exponential_taylor(const Matrix& h, const Matrix& o, double length, int order);

struct QmInstance {
  Matrix h, o;
  double alpha, beta, split;
};

QmInstance random_instance(std::uint64_t seed, int dim);

struct QmOracleResult {
  int dim = 0;
  std::vector<double> order_errors;    // relative error per g-order against the oracle
  std::vector<double> cutting_errors;  // relative split residual per g-order
  double max_order_error() const;
  double max_cutting_error() const;
};

// The jet expansion tracks e^{-T(H-gO)}, so the oracle is evaluated at -O.
QmOracleResult qm_oracle_check(const QmInstance& inst, int orders = 2, const QmOptions& opts = {});

}  // namespace fqft
