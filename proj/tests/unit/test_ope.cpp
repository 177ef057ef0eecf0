#include "fqft/errors.hpp"
#include "fqft/ope.hpp"

#include "random_theory.hpp"

#include <doctest.h>

using namespace fqft;

namespace {

OpeTable small_table() {
  OpeTable t;
  t.add_primary({"1", 0, 0});
  t.add_primary({"phi", 1, 1});
  t.add_primary({"psi", 1, 1});
  t.set_coefficient({"phi", "phi", "psi", {}, {}}, Rational(3, 4));
  t.set_coefficient({"phi", "phi", "1", Partition({1}), Partition({1})}, Rational(2));
  t.set_coefficient({"phi", "phi", "1", {}, {}}, Rational(1));
  t.set_mixing("1", "psi", Rational(-1, 8));
  return t;
}

}  // namespace

TEST_SUITE("ope") {
  TEST_CASE("marginal constant adds the mixing of the {1},{1} descendant") {
    const auto t = small_table();
    CHECK(t.marginal_constant("phi", "phi", "psi") == Rational(3, 4) + Rational(2) * Rational(-1, 8));
    CHECK(t.marginal_constant("phi", "phi", "phi") == 0);
    CHECK(t.k_constant("phi", "phi", "1") == 1);
    CHECK(t.marginals() == std::vector<std::string>{"phi", "psi"});
    CHECK(t.dimension_zero() == std::vector<std::string>{"1"});
  }

  TEST_CASE("exponents are h_c + |μ| − h_a − h_b") {
    const auto t = small_table();
    CHECK(t.exponents({"phi", "phi", "1", {}, {}}) == std::make_pair(Rational(-2), Rational(-2)));
    CHECK(t.exponents({"phi", "phi", "1", Partition({2, 1}), Partition({1})}) ==
          std::make_pair(Rational(1), Rational(-1)));
  }

  TEST_CASE("rows distinguish explicit zeros from missing data") {
    OpeTable t = small_table();
    CHECK_FALSE(t.has_rows("psi", "psi"));
    t.set_coefficient({"psi", "psi", "1", {}, {}}, Rational(0));
    CHECK(t.has_rows("psi", "psi"));
    CHECK(t.coefficient({"psi", "psi", "1", {}, {}}) == 0);
  }

  TEST_CASE("validation") {
    OpeTable neg;
    neg.add_primary({"x", Rational(-1), 0});
    CHECK_THROWS_AS(neg.validate(), ValidationError);

    OpeTable chiral_current;
    chiral_current.add_primary({"J", 1, 0});
    CHECK_THROWS_AS(chiral_current.validate(), ValidationError);

    OpeTable unknown = small_table();
    unknown.set_coefficient({"phi", "chi", "1", {}, {}}, Rational(1));
    CHECK_THROWS_AS(unknown.validate(), ValidationError);

    OpeTable bad_mixing = small_table();
    bad_mixing.set_mixing("phi", "psi", Rational(1));
    CHECK_THROWS_AS(bad_mixing.validate(), ValidationError);

    OpeTable dup;
    dup.add_primary({"1", 0, 0});
    CHECK_THROWS(dup.add_primary({"1", 0, 0}));
  }

  TEST_CASE("rationals serialize as p/q strings") {
    CHECK(rational_json(Rational(-3) / 6) == "-1/2");
    CHECK(rational_json(Rational(4)) == "4");
    CHECK(rational_from_json("7/21") == Rational(1, 3));
    CHECK(rational_from_json(5) == 5);
    CHECK_THROWS_AS(rational_from_json("1/0"), ValidationError);
    CHECK_THROWS_AS(rational_from_json("abc"), ValidationError);
  }

  TEST_CASE("JSON round trip of random tables") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
      const auto t = testing::random_theory(rng, {1 + i % 3, 1 + i % 2, true, true});
      const auto back = ope_table_from_json(to_json(t));
      CHECK(back.coefficients() == t.coefficients());
      CHECK(back.mixing_entries() == t.mixing_entries());
      CHECK(back.primaries().size() == t.primaries().size());
      CHECK(to_json(back) == to_json(t));
    }
  }

  TEST_CASE("theory files load") {
    const auto t = load_ope_table(std::string(FQFT_DATA_DIR) + "/theories/single-marginal.json");
    CHECK(t.marginals() == std::vector<std::string>{"phi"});
    CHECK(t.marginal_constant("phi", "phi", "phi") == 1);
    CHECK_THROWS_AS(load_ope_table("/nonexistent/theory.json"), ResourceError);
    CHECK_THROWS_AS(ope_table_from_json(nlohmann::json::parse(R"({"primaries": [{"label": "x"}]})")),
                    ValidationError);
  }
}
