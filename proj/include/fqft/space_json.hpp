#pragma once

#include "fqft/fock.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace fqft {

inline constexpr int kSpaceSchemaVersion = 1;

// {schema_version, l_max, basis: [[chiral], [antichiral]]..., operators: {name: [[row, col, "p/q"]...]}}.
nlohmann::json space_json(const SpacePtr& space, const std::vector<ModeOperator>& operators = {});

// Current modes j_n, j̄_n for 0 < |n| ≤ l_max and L_n, L̄_n for |n| ≤ l_max.
std::vector<ModeOperator> standard_modes(const SpacePtr& space);

// Rebuilds the operators of a dump against a freshly built space; throws ValidationError when the
// recorded basis differs from the canonical ordering.
std::map<std::string, SparseOperator> operators_from_json(const nlohmann::json& j);

}  // namespace fqft
