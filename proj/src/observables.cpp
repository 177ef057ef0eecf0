#include "fqft/observables.hpp"

#include <Eigen/Dense>

namespace fqft {

std::optional<std::pair<Rational, Rational>> bidegree(const BoundaryState<Rational>& w) {
  std::optional<std::pair<Rational, Rational>> out;
  for (std::size_t i = 0; i < w.dim(); ++i) {
    if (is_zero(w[i])) continue;
    const auto& s = w.space()->state(i);
    std::pair<Rational, Rational> d{s.chiral.level(), s.antichiral.level()};
    if (out && *out != d) return std::nullopt;
    out = d;
  }
  return out;
}

FockBasisState observable_state(const std::string& name) {
  if (name == "1" || name == "identity") return {};
  if (name == "j") return {Partition({1}), {}};
  if (name == "jbar") return {{}, Partition({1})};
  if (name == "jjbar") return {Partition({1}), Partition({1})};
  return parse_basis_label(name);
}

namespace {

double relative(double residual, double scale) { return scale > 0 ? residual / scale : residual; }

}  // namespace

std::vector<Rational> solve_in_span(const std::vector<BoundaryState<Rational>>& columns,
                                    const BoundaryState<Rational>& target, double& relative_residual) {
  const std::size_t n = columns.size();
  // Normal equations AᵀA x = Aᵀb, solved by exact Gauss-Jordan; free variables stay zero.
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < target.dim(); ++k) m[i][j] += columns[i][k] * columns[j][k];
    for (std::size_t k = 0; k < target.dim(); ++k) m[i][n] += columns[i][k] * target[k];
  }
  std::vector<std::optional<std::size_t>> pivot_row(n);
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t p = row;
    while (p < n && is_zero(m[p][col])) ++p;
    if (p == n) continue;
    std::swap(m[p], m[row]);
    const Rational inv = 1 / m[row][col];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row || is_zero(m[r][col])) continue;
      const Rational f = m[r][col];
      for (std::size_t c = col; c <= n; ++c) m[r][c] -= f * m[row][c];
    }
    pivot_row[col] = row++;
  }
  std::vector<Rational> x(n);
  for (std::size_t col = 0; col < n; ++col)
    if (pivot_row[col]) x[col] = m[*pivot_row[col]][n];
  BoundaryState<Rational> residual = target;
  for (std::size_t c = 0; c < n; ++c) residual -= x[c] * columns[c];
  relative_residual = relative(residual.norm(), target.norm());
  return x;
}

std::vector<double> solve_in_span(const std::vector<BoundaryState<double>>& columns, const BoundaryState<double>& target,
                                  double& relative_residual) {
  const auto d = static_cast<Eigen::Index>(target.dim());
  const auto n = static_cast<Eigen::Index>(columns.size());
  Eigen::MatrixXd a(d, n);
  Eigen::VectorXd b(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    b(k) = target[static_cast<std::size_t>(k)];
    for (Eigen::Index c = 0; c < n; ++c) a(k, c) = columns[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
  }
  const Eigen::VectorXd x = n == 0 ? Eigen::VectorXd() : Eigen::VectorXd(a.colPivHouseholderQr().solve(b));
  const double res = n == 0 ? b.cwiseAbs().maxCoeff() : (a * x - b).cwiseAbs().maxCoeff();
  relative_residual = relative(res, b.cwiseAbs().maxCoeff());
  return {x.data(), x.data() + x.size()};
}

}  // namespace fqft
