#include "fqft/errors.hpp"
#include "fqft/free_boson.hpp"

#include <doctest.h>

using namespace fqft;

namespace {

using State = BoundaryState<Rational>;

State jn_jbarn(const SpacePtr& space, int n) {
  return State::basis(space, FockBasisState{Partition({n}), Partition({n})});
}

}  // namespace

TEST_SUITE("free_boson") {
  TEST_CASE("the marginal OPE has K = 1 on the vacuum and no marginal constant") {
    for (const int l_max : {2, 4}) {
      const auto table = free_boson_table(build_space(l_max));
      CHECK(table.k_constant(kMarginalLabel, kMarginalLabel, "1") == 1);
      CHECK(table.marginal_constant(kMarginalLabel, kMarginalLabel, kMarginalLabel) == 0);
      CHECK(table.marginals() == std::vector<std::string>{kMarginalLabel});
    }
  }

  TEST_CASE("minimal correction is −½ r^{-2} times the vacuum") {
    const auto space = build_space(4);
    const auto family = free_boson_deformed_family(space, SubtractionScheme::minimal);
    const auto* dv = family.find({g_symbol(kMarginalLabel)});
    REQUIRE(dv);
    CHECK(*dv == RExpansion<Rational>::monomial(-2, 0, Rational(-1, 2) * State::vacuum(space)));
  }

  TEST_CASE("disk integral of j j̄ is Σ 1/(2n) j_{-n} j̄_{-n}|0⟩ at every radius") {
    const auto space = build_space(6);
    State expected(space);
    for (int n = 1; 2 * n <= 6; ++n) expected += Rational(1, 2 * n) * jn_jbarn(space, n);
    for (const Rational radius : {Rational(1), Rational(2), Rational(3, 7)})
      CHECK(marginal_disk_integral(space, radius) == expected);
    const Rational R(2);

    const auto disk = deformed_disk(space, R);
    CHECK(disk.find({})->constant_term() == State::vacuum(space));
    CHECK(disk.find({g_symbol(kMarginalLabel)})->constant_term() == expected);
  }

  TEST_CASE("the deformed family is good in Fock space and agrees with the formal engine") {
    const auto space = build_space(4);
    const FormalTheory theory(free_boson_table(space));
    for (const auto scheme : {SubtractionScheme::full, SubtractionScheme::minimal}) {
      const auto family = free_boson_deformed_family(space, scheme);
      const auto inserted = deformed_annulus_apply(space, Rational(1), family);
      const auto formal = limit_inner(insert_deformed(theory, deformed_family(theory, kMarginalLabel, scheme)));
      for (const auto& [m, v] : inserted.terms()) {
        const auto lim = limit_r0(v);
        REQUIRE(lim.ok());
        const auto* f = formal.find(m);
        REQUIRE(f);
        const auto at_unit = f->transformed([](const FormalLabel&, const SymExpr& c) { return c.at_one(kOuter); });
        CHECK(*lim.value == to_fock(space, at_unit).constant_term());
      }
    }
  }

  TEST_CASE("the bare marginal family is not good under the deformed annulus") {
    const auto space = build_space(3);
    Jet<RExpansion<Rational>> bare(first_order_algebra({kMarginalLabel}));
    bare.add({}, named_observable<Rational>(space, kMarginalLabel).representative);
    const auto inserted = deformed_annulus_apply(space, Rational(1), bare);
    CHECK_FALSE(limit_r0(*inserted.find({g_symbol(kMarginalLabel)})).ok());
  }

  TEST_CASE("labels and families outside the free boson are rejected") {
    const auto space = build_space(2);
    CHECK_THROWS_AS(fock_state({"phi", {}, {}}), ValidationError);
    CHECK_THROWS_AS(to_fock(space, FormalState::basis({"1", {}, {}}, SymExpr::power(kOuter, 1))), ValidationError);
    CHECK(fock_state({"1", Partition({2}), Partition({1})}).label() == "j[2]jbar[1]");
  }
}
