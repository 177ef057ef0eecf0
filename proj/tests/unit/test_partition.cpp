#include "fqft/errors.hpp"
#include "fqft/partition.hpp"

#include <doctest.h>

#include <numeric>
#include <set>

using namespace fqft;

TEST_SUITE("partition") {
  TEST_CASE("partition counts follow the partition numbers") {
    const std::vector<std::size_t> p{1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77};
    for (int n = 0; n < static_cast<int>(p.size()); ++n) {
      CHECK(partition_count(n) == p[n]);
      CHECK(partitions_of(n).size() == p[n]);
    }
  }

  TEST_CASE("enumerated partitions are valid, distinct and descending lexicographic") {
    for (int n = 0; n <= 10; ++n) {
      const auto ps = partitions_of(n);
      std::set<std::vector<int>> seen;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto& parts = ps[i].parts();
        CHECK(std::accumulate(parts.begin(), parts.end(), 0) == n);
        CHECK(ps[i].level() == n);
        CHECK(std::is_sorted(parts.rbegin(), parts.rend()));
        CHECK(seen.insert(parts).second);
        if (i > 0) CHECK(ps[i - 1].parts() > parts);
      }
      if (n > 0) CHECK(ps.front().parts() == std::vector<int>{n});
    }
  }

  TEST_CASE("constructor enforces positive non-increasing parts") {
    const Partition p({3, 1, 1});
    CHECK(p.parts() == std::vector<int>{3, 1, 1});
    CHECK(p.level() == 5);
    CHECK(p.multiplicity(1) == 2);
    CHECK(p.multiplicity(2) == 0);
    CHECK_THROWS(Partition({2, 0}));
    CHECK_THROWS(Partition({-1}));
    CHECK_THROWS_AS(Partition({1, 3}), ContractViolation);
  }

  TEST_CASE("adding and removing parts are inverse") {
    const Partition p({4, 2, 2});
    CHECK(p.with_part(3).parts() == std::vector<int>{4, 3, 2, 2});
    CHECK(p.with_part(3).without_part(3) == p);
    CHECK(p.without_part(2).parts() == std::vector<int>{4, 2});
    CHECK_THROWS(p.without_part(1));
  }

  TEST_CASE("text round trip") {
    for (int n = 0; n <= 7; ++n)
      for (const auto& p : partitions_of(n)) CHECK(parse_partition(p.to_string()) == p);
    CHECK(parse_partition("[]").empty());
    CHECK_THROWS_AS(parse_partition("[1,x]"), ValidationError);
    CHECK(parse_partition("1,2") == Partition({2, 1}));
    CHECK_THROWS_AS(parse_partition("[2,-1]"), ValidationError);
    CHECK_THROWS_AS(parse_partition("[3a]"), ValidationError);
  }
}
