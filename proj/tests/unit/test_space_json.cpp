#include "fqft/errors.hpp"
#include "fqft/space_json.hpp"

#include <doctest.h>

#include <fstream>

using namespace fqft;

namespace {

nlohmann::json read_golden(const std::string& name) {
  std::ifstream in(std::string(FQFT_DATA_DIR) + "/golden/" + name);
  REQUIRE(in);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_SUITE("space_json") {
  TEST_CASE("l_max = 1 dump matches the golden file") {
    const auto space = build_space(1);
    const std::vector<ModeOperator> ops{build_mode(space, ModeKind::j, -1),      build_mode(space, ModeKind::j, 1),
                                        build_mode(space, ModeKind::jbar, -1),   build_mode(space, ModeKind::jbar, 1),
                                        build_virasoro(space, 0, false, ModeKind::L),
                                        build_virasoro(space, 0, false, ModeKind::Lbar)};
    CHECK(space_json(space, ops) == read_golden("space-lmax1.json"));
  }

  TEST_CASE("dumps round-trip through operators_from_json") {
    for (const int l_max : {2, 4}) {
      const auto space = build_space(l_max);
      const auto modes = standard_modes(space);
      const auto parsed = operators_from_json(nlohmann::json::parse(space_json(space, modes).dump()));
      REQUIRE(parsed.size() == modes.size());
      for (const auto& op : modes) CHECK(parsed.at(op.name()).triplets() == op.matrix.triplets());
    }
  }

  TEST_CASE("malformed dumps are rejected") {
    auto j = read_golden("space-lmax1.json");
    auto swapped = j;
    std::swap(swapped["basis"][1], swapped["basis"][2]);
    CHECK_THROWS_AS(operators_from_json(swapped), ValidationError);
    auto out_of_range = j;
    out_of_range["operators"]["j_1"] = {{0, 7, "1"}};
    CHECK_THROWS_AS(operators_from_json(out_of_range), ValidationError);
    auto version = j;
    version["schema_version"] = 99;
    CHECK_THROWS_AS(operators_from_json(version), ValidationError);
    j.erase("basis");
    CHECK_THROWS_AS(operators_from_json(j), ValidationError);
  }
}
