#include "fqft/rational.hpp"

#include "fqft/errors.hpp"

#include <algorithm>
#include <cctype>

namespace fqft {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) throw ValidationError("empty rational literal");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) throw ValidationError("malformed rational literal: " + s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t decimals = s.size() - dot - 1;
    Rational q;
    if (q.get_num().set_str(digits, 10) != 0) throw ValidationError("malformed rational literal: " + s);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, decimals);
    q.get_den() = den;
    q.canonicalize();
    return q;
  }
  Rational q;
  if (q.set_str(s, 10) != 0) throw ValidationError("malformed rational literal: " + s);
  if (q.get_den() == 0) throw ValidationError("zero denominator: " + s);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational rational_pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (sgn(base) == 0) throw ContractViolation("zero raised to a negative power");
    return rational_pow(Rational(1) / base, -exponent);
  }
  Rational result;
  mpz_pow_ui(result.get_num_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(result.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  result.canonicalize();
  return result;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

long floor_to_long(const Rational& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  if (!f.fits_slong_p()) throw ResourceError("rational exponent out of range");
  return f.get_si();
}

}  // namespace fqft
