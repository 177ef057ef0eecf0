#include "fqft/space_json.hpp"

#include "fqft/ope.hpp"

namespace fqft {

nlohmann::json space_json(const SpacePtr& space, const std::vector<ModeOperator>& operators) {
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& s : space->basis()) basis.push_back({s.chiral.parts(), s.antichiral.parts()});
  nlohmann::json ops = nlohmann::json::object();
  for (const auto& op : operators) {
    require_same_space(space, op.space());
    nlohmann::json triplets = nlohmann::json::array();
    for (const auto& [row, col, value] : op.matrix.triplets()) triplets.push_back({row, col, rational_json(value)});
    ops[op.name()] = std::move(triplets);
  }
  return {{"schema_version", kSpaceSchemaVersion}, {"l_max", space->l_max()}, {"basis", basis}, {"operators", ops}};
}

std::vector<ModeOperator> standard_modes(const SpacePtr& space) {
  std::vector<ModeOperator> out;
  const int l = space->l_max();
  for (const auto kind : {ModeKind::j, ModeKind::jbar})
    for (int n = -l; n <= l; ++n)
      if (n != 0) out.push_back(build_mode(space, kind, n));
  for (const auto kind : {ModeKind::L, ModeKind::Lbar})
    for (int n = -l; n <= l; ++n) out.push_back(build_virasoro(space, n, false, kind));
  return out;
}

std::map<std::string, SparseOperator> operators_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema_version").get<int>() != kSpaceSchemaVersion) throw ValidationError("unsupported space schema");
    const auto space = build_space(j.at("l_max").get<int>());
    const auto& basis = j.at("basis");
    if (basis.size() != space->dim()) throw ValidationError("basis size differs from the canonical space");
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const FockBasisState s{Partition(basis[i].at(0).get<std::vector<int>>()),
                             Partition(basis[i].at(1).get<std::vector<int>>())};
      if (!(s == space->state(i))) throw ValidationError("basis entry " + std::to_string(i) + " is out of order");
    }
    std::map<std::string, SparseOperator> out;
    for (const auto& [name, triplets] : j.at("operators").items()) {
      SparseOperator m(space);
      for (const auto& t : triplets) {
        const auto row = t.at(0).get<std::size_t>(), col = t.at(1).get<std::size_t>();
        if (row >= space->dim() || col >= space->dim()) throw ValidationError("triplet index out of range in " + name);
        m.add(row, col, rational_from_json(t.at(2)));
      }
      out.emplace(name, std::move(m));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed space dump: ") + e.what());
  } catch (const ContractViolation& e) {
    throw ValidationError(std::string("malformed space dump: ") + e.what());
  }
}

}  // namespace fqft
