#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace fqft {

// Integer partition stored as non-increasing positive parts.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  int level() const { return level_; }
  bool empty() const { return parts_.empty(); }
  std::size_t size() const { return parts_.size(); }
  int multiplicity(int part) const;

  Partition with_part(int part) const;
  Partition without_part(int part) const;

  std::string to_string() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
    return a.parts_ <=> b.parts_;
  }

 private:
  std::vector<int> parts_;
  int level_ = 0;
};

// All partitions of n, in descending lexicographic order ([n] first).
std::vector<Partition> partitions_of(int n);
std::size_t partition_count(int n);

Partition parse_partition(const std::string& text);

}  // namespace fqft
