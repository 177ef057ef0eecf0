#include "fqft/errors.hpp"
#include "fqft/geometry.hpp"

#include <doctest.h>

#include <random>

using namespace fqft;

namespace {

Rational random_radius(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(1, 40), den(1, 12);
  return Rational(num(rng)) / den(rng);
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("annulus entries are (r/R)^E and the disk is the vacuum") {
    const auto space = build_space(4);
    const auto a = annulus_pf<ExactPower>(space, Rational(3), Rational(1));
    for (std::size_t i = 0; i < space->dim(); ++i)
      CHECK(a.values()[i] == ExactPower(rational_pow(Rational(1, 3), space->level(i))));
    const auto d = disk_pf<double>(space, Rational(2));
    CHECK(d.values()[0] == 1.0);
    for (std::size_t i = 1; i < space->dim(); ++i) CHECK(d.values()[i] == 0.0);
  }

  TEST_CASE("cylinder entries are e^{-L E}") {
    const auto space = build_space(3);
    const auto c = cylinder_pf<double>(space, Rational(1, 2));
    for (std::size_t i = 0; i < space->dim(); ++i)
      CHECK(c.values()[i] == doctest::Approx(std::exp(-0.5 * space->level(i))).epsilon(1e-15));
  }

  TEST_CASE("random triples glue exactly") {
    std::mt19937_64 rng(17);
    const auto space = build_space(5);
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<Rational> r{random_radius(rng), random_radius(rng), random_radius(rng)};
      std::sort(r.rbegin(), r.rend());
      if (r[0] == r[1] || r[1] == r[2]) continue;
      const auto glued = glue(annulus_pf<ExactPower>(space, r[0], r[1]), annulus_pf<ExactPower>(space, r[1], r[2]));
      CHECK(glued.values() == annulus_pf<ExactPower>(space, r[0], r[2]).values());
      const auto capped = glue(annulus_pf<ExactPower>(space, r[0], r[2]), disk_pf<ExactPower>(space, r[2]));
      CHECK(capped.values() == disk_pf<ExactPower>(space, r[0]).values());
      const auto cyl = glue(cylinder_pf<ExactPower>(space, r[1]), cylinder_pf<ExactPower>(space, r[2]));
      CHECK(cyl.values() == cylinder_pf<ExactPower>(space, r[1] + r[2]).values());
      CHECK(std::get<Annulus>(glued.surface()).outer == r[0]);
    }
  }

  TEST_CASE("explicit anomaly convention still cuts exactly") {
    const auto space = build_space(4);
    const auto family = annulus_family<ExactPower>(space, VacuumConvention::explicit_anomaly);
    const auto report = verify_cutting(family, {Rational(5), Rational(3), Rational(2), Rational(1, 2)});
    CHECK(report.passed(0.0));
    CHECK(report.max_residual == 0.0);
  }

  TEST_CASE("float cutting residual stays below 1e-12") {
    const auto report =
        verify_cutting(annulus_family<double>(build_space(6)), {Rational(7), Rational(4), Rational(2), Rational(1, 3)});
    CHECK(report.passed(1e-12));
    CHECK_FALSE(report.exact);
  }

  TEST_CASE("a corrupted entry is reported with its state label") {
    const auto space = build_space(3);
    auto base = annulus_family<ExactPower>(space);
    PfFamily<ExactPower> broken{[&](const Rational& o, const Rational& i) {
                                  auto pf = base.segment(o, i);
                                  if (o == 4 && i == 1) pf = pf.with_entry(3, pf.values()[3] * ExactPower(Rational(2)));
                                  return pf;
                                },
                                {}};
    const auto report = verify_cutting(broken, {Rational(4), Rational(2), Rational(1)});
    CHECK_FALSE(report.passed(0.0));
    REQUIRE(report.offending_index);
    CHECK(*report.offending_index == 3);
    CHECK(report.offending_label == space->state(3).label());
  }

  TEST_CASE("contracts") {
    const auto space = build_space(2);
    CHECK_THROWS_AS(annulus_pf<double>(space, Rational(1), Rational(2)), ContractViolation);
    CHECK_THROWS_AS(annulus_pf<double>(space, Rational(1), Rational(0)), ContractViolation);
    CHECK_THROWS_AS(cylinder_pf<double>(space, Rational(-1)), ContractViolation);
    CHECK_THROWS_AS(disk_pf<double>(space, Rational(0)), ContractViolation);
    CHECK_THROWS_AS(glue(disk_pf<double>(space, Rational(1)), disk_pf<double>(space, Rational(1))), ContractViolation);
    CHECK_THROWS_AS(glue(annulus_pf<double>(space, Rational(4), Rational(2)), annulus_pf<double>(space, Rational(3), Rational(1))),
                    ContractViolation);
  }

  TEST_CASE("disjoint union glues componentwise") {
    const auto space = build_space(2);
    const auto u = disjoint_union(annulus_pf<ExactPower>(space, Rational(4), Rational(2)),
                                  cylinder_pf<ExactPower>(space, Rational(1)));
    const auto v = disjoint_union(annulus_pf<ExactPower>(space, Rational(2), Rational(1)),
                                  cylinder_pf<ExactPower>(space, Rational(2)));
    const auto w = disjoint_union(annulus_pf<ExactPower>(space, Rational(4), Rational(1)),
                                  cylinder_pf<ExactPower>(space, Rational(3)));
    CHECK(glue(u, v).diagonal == w.diagonal);
  }
}
