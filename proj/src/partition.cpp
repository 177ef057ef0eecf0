#include "fqft/partition.hpp"

#include "fqft/errors.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <numeric>
#include <sstream>

namespace fqft {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] <= 0) throw ContractViolation("partition parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1]) throw ContractViolation("partition parts must be non-increasing");
  }
  level_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

int Partition::multiplicity(int part) const {
  return static_cast<int>(std::count(parts_.begin(), parts_.end(), part));
}

Partition Partition::with_part(int part) const {
  if (part <= 0) throw ContractViolation("partition parts must be positive");
  std::vector<int> p = parts_;
  p.insert(std::upper_bound(p.begin(), p.end(), part, std::greater<>()), part);
  return Partition(std::move(p));
}

Partition Partition::without_part(int part) const {
  std::vector<int> p = parts_;
  auto it = std::find(p.begin(), p.end(), part);
  if (it == p.end()) throw ContractViolation("part not present in partition");
  p.erase(it);
  return Partition(std::move(p));
}

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
  os << ']';
  return os.str();
}

namespace {

void extend(int remaining, int max_part, std::vector<int>& current, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(current);
    return;
  }
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    current.push_back(part);
    extend(remaining - part, part, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<Partition> partitions_of(int n) {
  if (n < 0) throw ContractViolation("partition of a negative integer");
  std::vector<Partition> out;
  std::vector<int> current;
  extend(n, n, current, out);
  return out;
}

std::size_t partition_count(int n) {
  if (n < 0) return 0;
  std::vector<std::size_t> p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= n; ++part)
    for (int m = part; m <= n; ++m) p[m] += p[m - part];
  return p[n];
}

Partition parse_partition(const std::string& text) {
  std::string s = text;
  if (!s.empty() && s.front() == '[') s.erase(0, 1);
  if (!s.empty() && s.back() == ']') s.pop_back();
  std::vector<int> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    int v = 0;
    const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || end != item.data() + item.size() || v <= 0)
      throw ValidationError("malformed partition: " + text);
    parts.push_back(v);
  }
  std::sort(parts.begin(), parts.end(), std::greater<>());
  return Partition(std::move(parts));
}

}  // namespace fqft
