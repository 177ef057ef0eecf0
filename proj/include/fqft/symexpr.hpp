#pragma once

#include "fqft/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fqft {

// x^power · log(x)^log_power for a positive symbol x.
struct AtomPower {
  Rational power;
  int log_power = 0;

  friend bool operator==(const AtomPower& a, const AtomPower& b) {
    return a.power == b.power && a.log_power == b.log_power;
  }
  friend bool operator<(const AtomPower& a, const AtomPower& b) {
    return a.power < b.power || (a.power == b.power && a.log_power < b.log_power);
  }
};

using SymMonomial = std::map<std::string, AtomPower>;

// Finite sums of rational multiples of power-log monomials in named positive symbols (r, R, lambda, ...).
class SymExpr {
 public:
  SymExpr() = default;
  SymExpr(const Rational& c);  // NOLINT: constants lift implicitly
  SymExpr(long c) : SymExpr(Rational(c)) {}  // NOLINT

  static SymExpr power(const std::string& symbol, const Rational& p);
  static SymExpr log(const std::string& symbol, int k = 1);
  static SymExpr monomial(const Rational& c, SymMonomial m);

  const std::map<SymMonomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::optional<Rational> as_constant() const;

  SymExpr& operator+=(const SymExpr& o);
  SymExpr& operator-=(const SymExpr& o);
  SymExpr& operator*=(const SymExpr& o);
  friend SymExpr operator+(SymExpr a, const SymExpr& b) { return a += b; }
  friend SymExpr operator-(SymExpr a, const SymExpr& b) { return a -= b; }
  friend SymExpr operator*(SymExpr a, const SymExpr& b) { return a *= b; }
  friend SymExpr operator-(SymExpr a) { return a *= SymExpr(Rational(-1)); }
  friend bool operator==(const SymExpr& a, const SymExpr& b) { return a.terms_ == b.terms_; }

  // x ↦ factor·x, expanding log(factor·x) = log(factor) + log(x) binomially.
  SymExpr scale_symbol(const std::string& symbol, const std::string& factor) const;
  SymExpr rename(const std::string& from, const std::string& to) const;
  // Sets the symbol to 1: powers drop out, log terms vanish.
  SymExpr at_one(const std::string& symbol) const;

  // Terms with negative power of the symbol or a bare log of it.
  std::vector<std::pair<SymMonomial, Rational>> singular_terms(const std::string& symbol) const;
  // Limit symbol → 0, if it exists.
  std::optional<SymExpr> limit_zero(const std::string& symbol) const;
  // Coefficient of symbol^p log(symbol)^q, as an expression in the remaining symbols.
  SymExpr coefficient(const std::string& symbol, const Rational& p, int q = 0) const;
  bool depends_on(const std::string& symbol) const;

  double evaluate(const std::map<std::string, double>& values) const;
  std::string to_string() const;

 private:
  void add_term(const SymMonomial& m, const Rational& c);
  std::map<SymMonomial, Rational> terms_;
};

inline bool is_zero(const SymExpr& e) { return e.is_zero(); }

}  // namespace fqft
