#include "fqft/jet.hpp"

namespace fqft {

JetAlgebra::JetAlgebra(std::vector<JetSymbol> symbols, std::map<std::string, int> group_order, int order)
    : symbols_(std::move(symbols)), group_order_(std::move(group_order)), order_(order) {
  if (order_ < 0) throw ContractViolation("jet order must be non-negative");
  std::sort(symbols_.begin(), symbols_.end(), [](const JetSymbol& a, const JetSymbol& b) { return a.name < b.name; });
  for (const auto& s : symbols_) {
    if (!names_.emplace(s.name, s.group).second) throw ContractViolation("duplicate coupling symbol " + s.name);
    group_order_.try_emplace(s.group, order_);
  }
}

bool JetAlgebra::has_symbol(const std::string& name) const { return names_.count(name) > 0; }

const std::string& JetAlgebra::group_of(const std::string& name) const {
  auto it = names_.find(name);
  if (it == names_.end()) throw ContractViolation("unknown coupling symbol " + name);
  return it->second;
}

bool JetAlgebra::admissible(const JetMonomial& m) const {
  if (static_cast<int>(m.size()) > order_) return false;
  std::map<std::string, int> degree;
  for (const auto& s : m)
    if (++degree[group_of(s)] > group_order_.at(group_of(s))) return false;
  return true;
}

namespace {

AlgebraPtr make(const std::vector<std::string>& labels, const std::vector<std::pair<std::string (*)(const std::string&), std::string>>& families,
                std::map<std::string, int> orders) {
  std::vector<JetSymbol> symbols;
  for (const auto& [symbol, group] : families)
    for (const auto& l : labels) symbols.push_back({symbol(l), group});
  return std::make_shared<const JetAlgebra>(std::move(symbols), std::move(orders), 2);
}

}  // namespace

AlgebraPtr double_deformation_algebra(const std::vector<std::string>& labels) {
  return make(labels, {{g_symbol, "g"}, {gt_symbol, "gt"}}, {{"g", 1}, {"gt", 1}});
}

AlgebraPtr first_order_algebra(const std::vector<std::string>& labels) {
  return make(labels, {{g_symbol, "g"}}, {{"g", 1}});
}

AlgebraPtr combined_algebra(const std::vector<std::string>& labels) {
  return make(labels, {{gc_symbol, "gc"}}, {{"gc", 2}});
}

}  // namespace fqft
