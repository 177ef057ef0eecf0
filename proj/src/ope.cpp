#include "fqft/ope.hpp"

#include <algorithm>
#include <fstream>

namespace fqft {

void OpeTable::add_primary(Primary p) {
  if (has_primary(p.label)) throw ValidationError("duplicate primary " + p.label);
  primaries_.push_back(std::move(p));
}

bool OpeTable::has_primary(const std::string& label) const {
  return std::any_of(primaries_.begin(), primaries_.end(), [&](const Primary& p) { return p.label == label; });
}

const Primary& OpeTable::primary(const std::string& label) const {
  for (const auto& p : primaries_)
    if (p.label == label) return p;
  throw ValidationError("unknown primary " + label);
}

void OpeTable::set_coefficient(const OpeKey& key, const Rational& value) { coefficients_[key] = value; }

Rational OpeTable::coefficient(const OpeKey& key) const {
  auto it = coefficients_.find(key);
  return it == coefficients_.end() ? Rational(0) : it->second;
}

bool OpeTable::has_rows(const std::string& a, const std::string& b) const {
  auto it = coefficients_.lower_bound(OpeKey{a, b, "", {}, {}});
  return it != coefficients_.end() && it->first.a == a && it->first.b == b;
}

std::vector<std::pair<OpeKey, Rational>> OpeTable::rows(const std::string& a, const std::string& b) const {
  std::vector<std::pair<OpeKey, Rational>> out;
  for (auto it = coefficients_.lower_bound(OpeKey{a, b, "", {}, {}});
       it != coefficients_.end() && it->first.a == a && it->first.b == b; ++it)
    out.emplace_back(it->first, it->second);
  return out;
}

void OpeTable::set_mixing(const std::string& from, const std::string& to, const Rational& value) {
  if (is_zero(value)) mixing_.erase({from, to});
  else mixing_[{from, to}] = value;
}

Rational OpeTable::mixing(const std::string& from, const std::string& to) const {
  auto it = mixing_.find({from, to});
  return it == mixing_.end() ? Rational(0) : it->second;
}

std::vector<std::string> OpeTable::marginals() const {
  std::vector<std::string> out;
  for (const auto& p : primaries_)
    if (p.marginal()) out.push_back(p.label);
  return out;
}

std::vector<std::string> OpeTable::dimension_zero() const {
  std::vector<std::string> out;
  for (const auto& p : primaries_)
    if (p.h == 0 && p.hbar == 0) out.push_back(p.label);
  return out;
}

Rational OpeTable::marginal_constant(const std::string& alpha, const std::string& beta, const std::string& gamma) const {
  Rational total = coefficient({alpha, beta, gamma, {}, {}});
  const Partition one({1});
  for (const auto& a : dimension_zero()) total += coefficient({alpha, beta, a, one, one}) * mixing(a, gamma);
  return total;
}

Rational OpeTable::k_constant(const std::string& alpha, const std::string& beta, const std::string& a) const {
  return coefficient({alpha, beta, a, {}, {}});
}

std::pair<Rational, Rational> OpeTable::exponents(const OpeKey& key) const {
  const auto& pa = primary(key.a);
  const auto& pb = primary(key.b);
  const auto& pc = primary(key.c);
  return {pc.h + key.mu.level() - pa.h - pb.h, pc.hbar + key.mubar.level() - pa.hbar - pb.hbar};
}

void OpeTable::validate() const {
  for (const auto& p : primaries_) {
    if (sgn(p.h) < 0 || sgn(p.hbar) < 0) throw ValidationError("primary " + p.label + " has negative dimension");
    if ((p.h == 0 && p.hbar == 1) || (p.h == 1 && p.hbar == 0))
      throw ValidationError("spin-carrying marginal primary " + p.label + " is not supported");
  }
  for (const auto& [key, value] : coefficients_)
    for (const auto* label : {&key.a, &key.b, &key.c})
      if (!has_primary(*label)) throw ValidationError("coefficient refers to unknown primary " + *label);
  for (const auto& [ft, value] : mixing_) {
    const auto& from = primary(ft.first);
    const auto& to = primary(ft.second);
    if (!(from.h == 0 && from.hbar == 0)) throw ValidationError("mixing source " + from.label + " must have dimension 0");
    if (!to.marginal()) throw ValidationError("mixing target " + to.label + " must be marginal");
  }
}

nlohmann::json rational_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number()) return parse_rational(j.dump());
  throw ValidationError("expected a rational, got " + j.dump());
}

namespace {

nlohmann::json partition_json(const Partition& p) { return p.parts(); }

Partition partition_from_json(const nlohmann::json& j) {
  if (j.is_null()) return {};
  if (j.is_string()) return parse_partition(j.get<std::string>());
  return Partition(j.get<std::vector<int>>());
}

}  // namespace

nlohmann::json to_json(const OpeTable& table) {
  nlohmann::json primaries = nlohmann::json::array();
  for (const auto& p : table.primaries())
    primaries.push_back({{"label", p.label}, {"h", rational_json(p.h)}, {"hbar", rational_json(p.hbar)}});
  nlohmann::json coefficients = nlohmann::json::array();
  for (const auto& [k, v] : table.coefficients())
    coefficients.push_back({{"a", k.a},
                            {"b", k.b},
                            {"c", k.c},
                            {"mu", partition_json(k.mu)},
                            {"mubar", partition_json(k.mubar)},
                            {"value", rational_json(v)}});
  nlohmann::json mixing = nlohmann::json::array();
  for (const auto& [ft, v] : table.mixing_entries())
    mixing.push_back({{"from", ft.first}, {"to", ft.second}, {"value", rational_json(v)}});
  return {{"schema_version", kOpeSchemaVersion},
          {"primaries", primaries},
          {"coefficients", coefficients},
          {"mixing", mixing}};
}

OpeTable ope_table_from_json(const nlohmann::json& j) {
  try {
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != kOpeSchemaVersion)
      throw ValidationError("unsupported OPE schema version " + j.at("schema_version").dump());
    OpeTable table;
    for (const auto& p : j.at("primaries"))
      table.add_primary({p.at("label").get<std::string>(), rational_from_json(p.at("h")), rational_from_json(p.at("hbar"))});
    for (const auto& c : j.value("coefficients", nlohmann::json::array())) {
      OpeKey key{c.at("a").get<std::string>(), c.at("b").get<std::string>(), c.at("c").get<std::string>(),
                 partition_from_json(c.value("mu", nlohmann::json())),
                 partition_from_json(c.value("mubar", nlohmann::json()))};
      table.set_coefficient(key, table.coefficient(key) + rational_from_json(c.at("value")));
    }
    for (const auto& m : j.value("mixing", nlohmann::json::array()))
      table.set_mixing(m.at("from").get<std::string>(), m.at("to").get<std::string>(), rational_from_json(m.at("value")));
    table.validate();
    return table;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed OPE table: ") + e.what());
  }
}

OpeTable load_ope_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot open theory file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("theory file " + path + " is not valid JSON: " + e.what());
  }
  return ope_table_from_json(j);
}

}  // namespace fqft
