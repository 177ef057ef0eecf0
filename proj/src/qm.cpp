#include "fqft/qm.hpp"

#include "fqft/errors.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>

namespace fqft {

namespace {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

Matrix exp_neg(const Matrix& h, double t) { return Matrix((-t * h).exp()); }

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw ValidationError(std::string(what) + " has non-finite entries");
}

void require_shape(const QmTheory& theory, const Matrix& op) {
  if (op.rows() != theory.dim() || op.cols() != theory.dim())
    throw ContractViolation(fmt::format("observable is {}x{}, expected {}x{}", op.rows(), op.cols(), theory.dim(),
                                        theory.dim()));
  require_finite(op, "observable");
}

// Entry (0, n) of exp(-T·Z) for the bidiagonal Z with the nodes on its diagonal: the divided
// difference of x ↦ e^{-Tx} at those nodes, stable for clustered nodes.
Complex divided_difference(const std::vector<Complex>& nodes, double length) {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  CMatrix z = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    z(i, i) = nodes[i];
    if (i + 1 < n) z(i, i + 1) = 1.0;
  }
  const CMatrix e = (Complex(-length) * z).exp();
  return e(0, n - 1);
}

struct Eigenbasis {
  CMatrix v, vinv;
  Eigen::VectorXcd lambda;
  double condition;
};

Eigenbasis eigenbasis(const Matrix& h) {
  Eigen::ComplexEigenSolver<CMatrix> es(h.cast<Complex>());
  if (es.info() != Eigen::Success) return {{}, {}, {}, std::numeric_limits<double>::infinity()};
  Eigenbasis b{es.eigenvectors(), {}, es.eigenvalues(), 0};
  Eigen::PartialPivLU<CMatrix> lu(b.v);
  b.vinv = lu.inverse();
  b.condition = b.v.norm() * b.vinv.norm();
  if (!b.vinv.allFinite()) b.condition = std::numeric_limits<double>::infinity();
  return b;
}

// Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
struct GaussRule {
  std::vector<double> x, w;
};

const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    constexpr int n = 12;
    GaussRule r;
    for (int i = 1; i <= n; ++i) {
      double x = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
      double dp = 0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.x.push_back(x);
      r.w.push_back(2 / ((1 - x * x) * dp * dp));
    }
    return r;
  }();
  return rule;
}

template <class F>
Matrix composite(F&& f, double a, double b, int panels, Eigen::Index n) {
  const auto& rule = gauss_rule();
  Matrix sum = Matrix::Zero(n, n);
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    for (std::size_t i = 0; i < rule.x.size(); ++i) sum += (0.5 * width * rule.w[i]) * f(mid + 0.5 * width * rule.x[i]);
  }
  return sum;
}

// Doubles the panel count until successive results agree.
template <class F>
Matrix adaptive(F&& integrate_with, double tolerance) {
  Matrix prev = integrate_with(1);
  for (int panels = 2; panels <= 64; panels *= 2) {
    Matrix next = integrate_with(panels);
    if ((next - prev).norm() <= tolerance * std::max(1.0, next.norm())) return next;
    prev = std::move(next);
  }
  throw ResourceError("segment quadrature did not converge");
}

bool use_eigen(const Eigenbasis& b, const QmOptions& opts) {
  switch (opts.method) {
    case IntegralMethod::eigen:
      if (!std::isfinite(b.condition)) throw Unsupported("Hamiltonian is not diagonalizable");
      return true;
    case IntegralMethod::quadrature:
      return false;
    case IntegralMethod::automatic:
      break;
  }
  return b.condition <= opts.max_condition;
}

Matrix first_order_quadrature(const Matrix& h, const Matrix& a, double length, double tol) {
  return adaptive(
      [&](int panels) {
        return composite([&](double s) { return Matrix(exp_neg(h, length - s) * a * exp_neg(h, s)); }, 0, length,
                         panels, h.rows());
      },
      tol);
}

}  // namespace

std::string CoefficientTraits<Matrix>::format(const Matrix& t) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    out += i ? ", [" : "[";
    for (Eigen::Index j = 0; j < t.cols(); ++j) out += (j ? ", " : "") + fmt::format("{}", t(i, j));
    out += "]";
  }
  return out + "]";
}

QmTheory::QmTheory(Matrix hamiltonian) : h_(std::move(hamiltonian)) {
  if (h_.rows() < 1 || h_.rows() != h_.cols()) throw ContractViolation("Hamiltonian must be square with dim >= 1");
  require_finite(h_, "Hamiltonian");
}

SegmentPF evolve(const QmTheory& theory, double alpha, double beta) {
  if (!(beta >= alpha)) throw ContractViolation("segment needs beta >= alpha");
  SegmentPF pf{alpha, beta, exp_neg(theory.hamiltonian(), beta - alpha)};
  require_finite(pf.value, "evolution operator");
  return pf;
}

Matrix qm_correlator(const QmTheory& theory, const std::vector<Insertion>& insertions, double alpha, double beta) {
  double upper = beta;
  Matrix out = Matrix::Identity(theory.dim(), theory.dim());
  for (std::size_t i = 0; i < insertions.size(); ++i) {
    const auto& ins = insertions[i];
    require_shape(theory, ins.op);
    const bool ordered = i == 0 ? ins.time <= upper : ins.time < upper;
    if (!ordered || ins.time < alpha) throw ContractViolation("insertions must satisfy alpha <= tau_k < ... < tau_1 <= beta");
    out = out * evolve(theory, ins.time, upper).value * ins.op;
    upper = ins.time;
  }
  return out * evolve(theory, alpha, upper).value;
}

TimeOrderedValue time_ordered(const QmTheory& theory, const Insertion& a, const Insertion& b, double alpha,
                              double beta, CoincidentPolicy policy) {
  if (a.time > b.time) return {qm_correlator(theory, {a, b}, alpha, beta), false};
  if (b.time > a.time) return {qm_correlator(theory, {b, a}, alpha, beta), false};
  if (policy == CoincidentPolicy::reject) throw ContractViolation("coincident insertion times");
  require_shape(theory, a.op);
  require_shape(theory, b.op);
  const Matrix sym = 0.5 * (a.op * b.op + b.op * a.op);
  return {qm_correlator(theory, {{sym, a.time}}, alpha, beta), true};
}

Matrix segment_integral(const QmTheory& theory, const Matrix& a, double length, const QmOptions& opts) {
  require_shape(theory, a);
  const Matrix& h = theory.hamiltonian();
  const auto basis = eigenbasis(h);
  if (!use_eigen(basis, opts)) return first_order_quadrature(h, a, length, opts.quadrature_tolerance);
  const auto n = h.rows();
  CMatrix at = basis.vinv * a.cast<Complex>() * basis.v;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) at(i, j) *= -divided_difference({basis.lambda(i), basis.lambda(j)}, length);
  return (basis.v * at * basis.vinv).real();
}

Matrix ordered_double_integral(const QmTheory& theory, const Matrix& a, const Matrix& b, double length,
                               const QmOptions& opts) {
  require_shape(theory, a);
  require_shape(theory, b);
  const Matrix& h = theory.hamiltonian();
  const auto basis = eigenbasis(h);
  const auto n = h.rows();
  if (!use_eigen(basis, opts)) {
    return adaptive(
        [&](int panels) {
          auto inner = [&](double s) {
            return composite([&](double u) { return Matrix(exp_neg(h, s - u) * b * exp_neg(h, u)); }, 0, s, panels, n);
          };
          return composite([&](double s) { return Matrix(exp_neg(h, length - s) * a * inner(s)); }, 0, length, panels,
                           n);
        },
        opts.quadrature_tolerance);
  }
  const CMatrix at = basis.vinv * a.cast<Complex>() * basis.v;
  const CMatrix bt = basis.vinv * b.cast<Complex>() * basis.v;
  CMatrix m = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        m(i, k) += at(i, j) * bt(j, k) *
                   divided_difference({basis.lambda(i), basis.lambda(j), basis.lambda(k)}, length);
  return (basis.v * m * basis.vinv).real();
}

namespace {

std::vector<std::string> labels_of(const std::vector<QmObservable>& family) {
  std::vector<std::string> labels;
  for (const auto& o : family) {
    if (std::find(labels.begin(), labels.end(), o.label) != labels.end())
      throw ContractViolation("duplicate observable label " + o.label);
    labels.push_back(o.label);
  }
  return labels;
}

}  // namespace

Jet<Matrix> qm_deform(const QmTheory& theory, const std::vector<QmObservable>& family, double alpha, double beta,
                      const QmOptions& opts) {
  Jet<Matrix> out(first_order_algebra(labels_of(family)));
  out.add({}, evolve(theory, alpha, beta).value);
  for (const auto& o : family) out.add({g_symbol(o.label)}, segment_integral(theory, o.op, beta - alpha, opts));
  return out;
}

QmDoubleDeformation qm_double_deform(const QmTheory& theory, const std::vector<QmObservable>& family, double alpha,
                                     double beta, const QmOptions& opts) {
  const auto labels = labels_of(family);
  const double length = beta - alpha;
  Jet<Matrix> jet(double_deformation_algebra(labels));
  jet.add({}, evolve(theory, alpha, beta).value);
  for (const auto& o : family) {
    const Matrix first = segment_integral(theory, o.op, length, opts);
    jet.add({g_symbol(o.label)}, first);
    jet.add({gt_symbol(o.label)}, first);
  }
  // ∬ T⟨O_a(τ) O_b(τ̃)⟩ splits into the two orderings of the insertion times.
  for (const auto& a : family)
    for (const auto& b : family)
      jet.add({gt_symbol(b.label), g_symbol(a.label)}, ordered_double_integral(theory, a.op, b.op, length, opts) +
                                                           ordered_double_integral(theory, b.op, a.op, length, opts));
  auto pf = recombine(jet, labels, 1e-12);
  return {std::move(jet), std::move(pf)};
}

std::vector<Matrix> exponential_taylor(const Matrix& h, const Matrix& o, double length, int order) {
  const auto n = h.rows();
  const auto blocks = order + 1;
  Matrix m = Matrix::Zero(n * blocks, n * blocks);
  for (int i = 0; i < blocks; ++i) {
    m.block(i * n, i * n, n, n) = -length * h;
    if (i + 1 < blocks) m.block(i * n, (i + 1) * n, n, n) = -length * o;
  }
  const Matrix e = m.exp();
  std::vector<Matrix> out;
  for (int k = 0; k < blocks; ++k) out.push_back(e.block(0, k * n, n, n));
  return out;
}

QmInstance random_instance(std::uint64_t seed, int dim) {
  if (dim < 1) throw ContractViolation("dim must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(dim)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  QmInstance inst;
  inst.h = Matrix(dim, dim);
  inst.o = Matrix(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) inst.h(i, j) = normal(rng);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) inst.o(i, j) = normal(rng);
  inst.alpha = 2 * unit(rng) - 1;
  const double length = 0.2 + 1.8 * unit(rng);
  inst.beta = inst.alpha + length;
  inst.split = inst.alpha + length * (0.1 + 0.8 * unit(rng));
  return inst;
}

double QmOracleResult::max_order_error() const {
  return order_errors.empty() ? 0.0 : *std::max_element(order_errors.begin(), order_errors.end());
}

double QmOracleResult::max_cutting_error() const {
  return cutting_errors.empty() ? 0.0 : *std::max_element(cutting_errors.begin(), cutting_errors.end());
}

QmOracleResult qm_oracle_check(const QmInstance& inst, int orders, const QmOptions& opts) {
  if (orders < 0 || orders > 2) throw ContractViolation("orders must be 0, 1 or 2");
  const QmTheory theory(inst.h);
  const std::vector<QmObservable> family{{"O", inst.o}};
  const auto whole = qm_double_deform(theory, family, inst.alpha, inst.beta, opts).pf;
  const auto left = qm_double_deform(theory, family, inst.alpha, inst.split, opts).pf;
  const auto right = qm_double_deform(theory, family, inst.split, inst.beta, opts).pf;
  const auto glued = jet_product(right, left, [](const Matrix& x, const Matrix& y) { return Matrix(x * y); });
  const auto taylor = exponential_taylor(inst.h, -inst.o, inst.beta - inst.alpha, orders);

  const Matrix zero = Matrix::Zero(theory.dim(), theory.dim());
  auto coefficient = [&](const Jet<Matrix>& j, int k) {
    const Matrix* m = j.find(JetMonomial(static_cast<std::size_t>(k), gc_symbol("O")));
    return m ? *m : zero;
  };
  auto relative = [](const Matrix& x, const Matrix& ref) {
    const double scale = ref.norm();
    return scale > 0 ? (x - ref).norm() / scale : (x - ref).norm();
  };
  QmOracleResult result;
  result.dim = theory.dim();
  for (int k = 0; k <= orders; ++k) {
    result.order_errors.push_back(relative(coefficient(whole, k), taylor[k]));
    result.cutting_errors.push_back(relative(coefficient(glued, k), coefficient(whole, k)));
  }
  return result;
}

}  // namespace fqft
