#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>
#include <string_view>

namespace fqft {

using Rational = mpq_class;

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
Rational rational_pow(const Rational& base, long exponent);
bool is_integer(const Rational& q);
long floor_to_long(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

// Conversion from exact data into the working scalar.
template <class S>
S from_rational(const Rational& q);

template <>
inline Rational from_rational<Rational>(const Rational& q) {
  return q;
}

template <>
inline double from_rational<double>(const Rational& q) {
  return q.get_d();
}

inline double magnitude(const Rational& q) { return std::fabs(q.get_d()); }
inline double magnitude(double x) { return std::fabs(x); }

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero(double x) { return x == 0.0; }

template <class S>
inline constexpr bool is_exact_v = false;
template <>
inline constexpr bool is_exact_v<Rational> = true;

}  // namespace fqft
