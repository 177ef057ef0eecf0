#include "fqft/errors.hpp"
#include "fqft/fock.hpp"
#include "fqft/geometry.hpp"

#include <doctest.h>

using namespace fqft;

namespace {

// Column c of a∘b − b∘a − expected, restricted to columns whose images stay inside the truncation.
bool commutator_holds(const SparseOperator& a, const SparseOperator& b, const SparseOperator& expected, int headroom) {
  const auto& space = a.space();
  const auto lhs = compose(a, b) - compose(b, a) - expected;
  for (std::size_t c = 0; c < space->dim(); ++c) {
    if (space->level(c) + headroom > space->l_max()) continue;
    for (std::size_t r = 0; r < space->dim(); ++r)
      if (!is_zero(lhs.entry(r, c))) return false;
  }
  return true;
}

Rational hook_norm(const Partition& p) {
  Rational out(1);
  for (int n = 1; n <= p.level(); ++n) {
    const int m = p.multiplicity(n);
    for (int k = 1; k <= m; ++k) out *= Rational(n * k);
  }
  return out;
}

}  // namespace

TEST_SUITE("fock") {
  TEST_CASE("dimension is the convolution of partition numbers") {
    for (int l = 0; l <= 8; ++l) {
      std::size_t dim = 0;
      for (int total = 0; total <= l; ++total)
        for (int k = 0; k <= total; ++k) dim += partition_count(k) * partition_count(total - k);
      CHECK(build_space(l)->dim() == dim);
    }
  }

  TEST_CASE("basis is ordered by level, vacuum first, and labels round trip") {
    const auto space = build_space(5);
    CHECK(space->state(0).label() == "1");
    for (std::size_t i = 0; i < space->dim(); ++i) {
      if (i > 0) CHECK(space->level(i - 1) <= space->level(i));
      CHECK(space->index_of(parse_basis_label(space->state(i).label())) == i);
    }
    CHECK_FALSE(space->find({Partition({6}), {}}));
    CHECK_THROWS_AS(space->index_of({Partition({6}), {}}), ContractViolation);
  }

  TEST_CASE("space construction rejects bad levels") {
    CHECK_THROWS_AS(build_space(-1), ContractViolation);
    CHECK_THROWS_AS(build_space(kDefaultHardCap + 1), ResourceError);
  }

  TEST_CASE("mode action on explicit states") {
    const auto space = build_space(4);
    const auto v = BoundaryState<Rational>::basis(space, FockBasisState{Partition({2, 1}), {}});
    // j_2 removes the part 2 with weight 2·m_2 = 2.
    const auto r = apply_mode(build_mode(space, ModeKind::j, 2), v);
    CHECK(r.state == Rational(2) * BoundaryState<Rational>::basis(space, FockBasisState{Partition({1}), {}}));
    const auto up = apply_mode(build_mode(space, ModeKind::jbar, -1), v);
    CHECK(up.state == BoundaryState<Rational>::basis(space, FockBasisState{Partition({2, 1}), Partition({1})}));
    CHECK(up.dropped == 0);
    CHECK(apply_mode(build_mode(space, ModeKind::j, -2), v).dropped == 1);
    CHECK(apply_mode(build_mode(space, ModeKind::j, 0), v).state.is_zero());
  }

  TEST_CASE("Heisenberg relations [j_m, j_n] = m δ_{m+n}") {
    const auto space = build_space(6);
    for (auto kind : {ModeKind::j, ModeKind::jbar})
      for (int m = -2; m <= 2; ++m)
        for (int n = -2; n <= 2; ++n) {
          auto expected = SparseOperator(space);
          if (m + n == 0) expected = Rational(m) * SparseOperator::identity(space);
          CHECK(commutator_holds(build_mode(space, kind, m).matrix, build_mode(space, kind, n).matrix, expected, 4));
        }
    // Chiral and antichiral modes commute.
    CHECK(commutator_holds(build_mode(space, ModeKind::j, 1).matrix, build_mode(space, ModeKind::jbar, -1).matrix,
                           SparseOperator(space), 2));
  }

  TEST_CASE("Virasoro relations with c = 1") {
    const auto space = build_space(7);
    for (int m = -2; m <= 2; ++m)
      for (int n = -2; n <= 2; ++n) {
        const auto lm = build_virasoro(space, m, false).matrix;
        const auto ln = build_virasoro(space, n, false).matrix;
        SparseOperator expected = Rational(m - n) * build_virasoro(space, m + n, false).matrix;
        if (m + n == 0) expected += Rational(m * m * m - m, 12) * SparseOperator::identity(space);
        CHECK(commutator_holds(lm, ln, expected, 5));
      }
  }

  TEST_CASE("L_0 + L̄_0 eigenvalues are the levels, and the shift is -1/24") {
    const auto space = build_space(5);
    const auto& e = energies(space);
    for (std::size_t i = 0; i < space->dim(); ++i) CHECK(e[i] == space->level(i));
    const auto shifted = build_virasoro(space, 0, true).matrix;
    const auto plain = build_virasoro(space, 0, false).matrix;
    CHECK((shifted - plain).same_entries(Rational(-1, 24) * SparseOperator::identity(space)));
  }

  TEST_CASE("Shapovalov form is diagonal with norms Π n^{m_n} m_n!") {
    const auto space = build_space(5);
    const ShapovalovForm form(space);
    for (std::size_t i = 0; i < space->dim(); ++i)
      for (std::size_t j = 0; j < space->dim(); ++j) {
        const auto& s = space->state(i);
        const Rational expected = i == j ? hook_norm(s.chiral) * hook_norm(s.antichiral) : Rational(0);
        CHECK(form.gram(i, j) == expected);
      }
  }

  TEST_CASE("states from different truncations do not mix") {
    const auto a = BoundaryState<Rational>::vacuum(build_space(2));
    const auto b = BoundaryState<Rational>::vacuum(build_space(3));
    CHECK_THROWS_AS(a + b, ContractViolation);
  }
}
