#include "fqft/symexpr.hpp"

#include "fqft/errors.hpp"

#include <cmath>
#include <sstream>

namespace fqft {

namespace {

SymMonomial product(const SymMonomial& a, const SymMonomial& b) {
  SymMonomial out = a;
  for (const auto& [s, ap] : b) {
    auto& slot = out[s];
    slot.power += ap.power;
    slot.log_power += ap.log_power;
    if (slot.power == 0 && slot.log_power == 0) out.erase(s);
  }
  return out;
}

Rational binomial_int(int n, int k) {
  Rational out(1);
  for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}

}  // namespace

SymExpr::SymExpr(const Rational& c) {
  if (!fqft::is_zero(c)) terms_.emplace(SymMonomial{}, c);
}

SymExpr SymExpr::power(const std::string& symbol, const Rational& p) {
  SymMonomial m;
  if (p != 0) m[symbol] = {p, 0};
  return monomial(1, std::move(m));
}

SymExpr SymExpr::log(const std::string& symbol, int k) {
  if (k < 0) throw ContractViolation("negative log power");
  SymMonomial m;
  if (k > 0) m[symbol] = {0, k};
  return monomial(1, std::move(m));
}

SymExpr SymExpr::monomial(const Rational& c, SymMonomial m) {
  SymExpr e;
  e.add_term(m, c);
  return e;
}

std::optional<Rational> SymExpr::as_constant() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_.begin()->first.empty()) return terms_.begin()->second;
  return std::nullopt;
}

void SymExpr::add_term(const SymMonomial& m, const Rational& c) {
  if (fqft::is_zero(c)) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (fqft::is_zero(it->second)) terms_.erase(it);
}

SymExpr& SymExpr::operator+=(const SymExpr& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

SymExpr& SymExpr::operator-=(const SymExpr& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

SymExpr& SymExpr::operator*=(const SymExpr& o) {
  SymExpr out;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) out.add_term(product(ma, mb), ca * cb);
  *this = std::move(out);
  return *this;
}

SymExpr SymExpr::scale_symbol(const std::string& symbol, const std::string& factor) const {
  if (symbol == factor) throw ContractViolation("cannot scale a symbol by itself");
  SymExpr out;
  for (const auto& [m, c] : terms_) {
    auto it = m.find(symbol);
    if (it == m.end()) {
      out.add_term(m, c);
      continue;
    }
    const AtomPower ap = it->second;
    SymMonomial rest = m;
    rest.erase(symbol);
    const SymExpr base = monomial(c, rest) * power(factor, ap.power);
    for (int k = 0; k <= ap.log_power; ++k) {
      SymMonomial part;
      if (ap.power != 0 || k > 0) part[symbol] = {ap.power, k};
      out += base * monomial(binomial_int(ap.log_power, k), part) * log(factor, ap.log_power - k);
    }
  }
  return out;
}

SymExpr SymExpr::rename(const std::string& from, const std::string& to) const {
  SymExpr out;
  for (const auto& [m, c] : terms_) {
    auto it = m.find(from);
    if (it == m.end()) {
      out.add_term(m, c);
      continue;
    }
    SymMonomial rest = m;
    rest.erase(from);
    SymMonomial moved;
    moved[to] = it->second;
    out.add_term(product(rest, moved), c);
  }
  return out;
}

SymExpr SymExpr::at_one(const std::string& symbol) const {
  SymExpr out;
  for (const auto& [m, c] : terms_) {
    auto it = m.find(symbol);
    if (it == m.end()) {
      out.add_term(m, c);
    } else if (it->second.log_power == 0) {
      SymMonomial rest = m;
      rest.erase(symbol);
      out.add_term(rest, c);
    }
  }
  return out;
}

std::vector<std::pair<SymMonomial, Rational>> SymExpr::singular_terms(const std::string& symbol) const {
  std::vector<std::pair<SymMonomial, Rational>> out;
  for (const auto& [m, c] : terms_) {
    auto it = m.find(symbol);
    if (it == m.end()) continue;
    if (sgn(it->second.power) < 0 || (it->second.power == 0 && it->second.log_power > 0)) out.emplace_back(m, c);
  }
  return out;
}

std::optional<SymExpr> SymExpr::limit_zero(const std::string& symbol) const {
  if (!singular_terms(symbol).empty()) return std::nullopt;
  SymExpr out;
  for (const auto& [m, c] : terms_)
    if (!m.count(symbol)) out.add_term(m, c);
  return out;
}

SymExpr SymExpr::coefficient(const std::string& symbol, const Rational& p, int q) const {
  SymExpr out;
  for (const auto& [m, c] : terms_) {
    auto it = m.find(symbol);
    const AtomPower ap = it == m.end() ? AtomPower{0, 0} : it->second;
    if (!(ap.power == p && ap.log_power == q)) continue;
    SymMonomial rest = m;
    rest.erase(symbol);
    out.add_term(rest, c);
  }
  return out;
}

bool SymExpr::depends_on(const std::string& symbol) const {
  for (const auto& [m, c] : terms_)
    if (m.count(symbol)) return true;
  return false;
}

double SymExpr::evaluate(const std::map<std::string, double>& values) const {
  double total = 0;
  for (const auto& [m, c] : terms_) {
    double term = c.get_d();
    for (const auto& [s, ap] : m) {
      auto it = values.find(s);
      if (it == values.end()) throw ContractViolation("no value for symbol " + s);
      term *= std::pow(it->second, ap.power.get_d()) * std::pow(std::log(it->second), ap.log_power);
    }
    total += term;
  }
  return total;
}

std::string SymExpr::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) out << " + ";
    first = false;
    out << fqft::to_string(c);
    for (const auto& [s, ap] : m) {
      if (ap.power != 0) out << "*" << s << "^" << fqft::to_string(ap.power);
      if (ap.log_power > 0) out << "*log(" << s << ")" << (ap.log_power > 1 ? "^" + std::to_string(ap.log_power) : "");
    }
  }
  return out.str();
}

}  // namespace fqft
