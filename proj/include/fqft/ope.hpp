#pragma once

#include "fqft/errors.hpp"
#include "fqft/observables.hpp"
#include "fqft/partition.hpp"
#include "fqft/rational.hpp"

#include <json.hpp>

#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fqft {

inline constexpr int kOpeSchemaVersion = 1;

struct Primary {
  std::string label;
  Rational h;
  Rational hbar;

  Rational dimension() const { return h + hbar; }
  bool marginal() const { return h == 1 && hbar == 1; }
};

// Index of C_{ab}^c({μ},{μ̄}).
struct OpeKey {
  std::string a, b, c;
  Partition mu, mubar;

  friend bool operator==(const OpeKey&, const OpeKey&) = default;
  friend auto operator<=>(const OpeKey&, const OpeKey&) = default;
};

class OpeTable {
 public:
  void add_primary(Primary p);
  const std::vector<Primary>& primaries() const { return primaries_; }
  bool has_primary(const std::string& label) const;
  const Primary& primary(const std::string& label) const;

  // Explicit zeros are kept: they record that the row is known.
  void set_coefficient(const OpeKey& key, const Rational& value);
  Rational coefficient(const OpeKey& key) const;
  const std::map<OpeKey, Rational>& coefficients() const { return coefficients_; }
  bool has_rows(const std::string& a, const std::string& b) const;
  std::vector<std::pair<OpeKey, Rational>> rows(const std::string& a, const std::string& b) const;

  // M_a^b: the {1},{1} descendant of a dimension-zero primary a, expanded over marginals b.
  void set_mixing(const std::string& from, const std::string& to, const Rational& value);
  Rational mixing(const std::string& from, const std::string& to) const;
  const std::map<std::pair<std::string, std::string>, Rational>& mixing_entries() const { return mixing_; }

  std::vector<std::string> marginals() const;
  std::vector<std::string> dimension_zero() const;

  // C_{αβ}^γ = C_{αβ}^γ(∅,∅) + C_{αβ}^a({1},{1}) M_a^γ.
  Rational marginal_constant(const std::string& alpha, const std::string& beta, const std::string& gamma) const;
  // K_{αβ}^a: coefficient of |z|^{-4} on the dimension-zero primary a.
  Rational k_constant(const std::string& alpha, const std::string& beta, const std::string& a) const;

  // Holomorphic exponent Δ_{abc}({μ}) and its antiholomorphic partner.
  std::pair<Rational, Rational> exponents(const OpeKey& key) const;

  void validate() const;

 private:
  std::vector<Primary> primaries_;
  std::map<OpeKey, Rational> coefficients_;
  std::map<std::pair<std::string, std::string>, Rational> mixing_;
};

nlohmann::json rational_json(const Rational& q);
Rational rational_from_json(const nlohmann::json& j);

nlohmann::json to_json(const OpeTable& table);
OpeTable ope_table_from_json(const nlohmann::json& j);
OpeTable load_ope_table(const std::string& path);

// Rows of an extraction as JSON {c, exponents, coefficient, singular}.
template <class S>
nlohmann::json extraction_json(const OpeExtraction<S>& ext) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : ext.rows) {
    nlohmann::json coefficient;
    if constexpr (is_exact_v<S>) coefficient = rational_json(row.coefficient);
    else coefficient = row.coefficient;
    rows.push_back({{"c", row.target},
                    {"exponents", {row.z_power, row.zbar_power}},
                    {"coefficient", coefficient},
                    {"singular", row.singular}});
  }
  nlohmann::json unmatched = nlohmann::json::array();
  for (const auto& [ab, norm] : ext.unmatched) unmatched.push_back({{"exponents", {ab.first, ab.second}}, {"norm", norm}});
  return {{"a", ext.a},
          {"b", ext.b},
          {"rows", rows},
          {"singular_rows", ext.singular_rows},
          {"max_residual", ext.max_residual},
          {"unmatched", unmatched}};
}

}  // namespace fqft
