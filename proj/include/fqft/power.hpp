#pragma once

#include "fqft/rational.hpp"

#include <map>
#include <string>

namespace fqft {

// Exact value coeff · e^{e_exponent} · Π p^{q_p} over primes p with fractional q_p in [0,1).
// Closed under multiplication; equality is exact.
class ExactPower {
 public:
  ExactPower() : coeff_(0) {}
  ExactPower(const Rational& value) : coeff_(value) {}  // NOLINT: implicit lift of rationals

  static ExactPower power(const Rational& base, const Rational& exponent);
  static ExactPower exp(const Rational& exponent);

  const Rational& coefficient() const { return coeff_; }
  bool is_rational() const { return e_exponent_ == 0 && primes_.empty(); }
  double to_double() const;
  std::string to_string() const;

  ExactPower& operator*=(const ExactPower& o);
  friend ExactPower operator*(ExactPower a, const ExactPower& b) { return a *= b; }
  friend bool operator==(const ExactPower& a, const ExactPower& b);

 private:
  void normalize();

  Rational coeff_;
  Rational e_exponent_;
  std::map<unsigned long, Rational> primes_;
};

inline double to_double(const ExactPower& x) { return x.to_double(); }
inline double magnitude(const ExactPower& x) { return std::fabs(x.to_double()); }
inline bool is_zero(const ExactPower& x) { return is_zero(x.coefficient()); }

}  // namespace fqft
