#include "fqft/power.hpp"

#include "fqft/errors.hpp"

#include <cmath>
#include <sstream>

namespace fqft {
namespace {

constexpr unsigned long kFactorLimit = 1000000000000UL;

std::map<unsigned long, long> factorize(const mpz_class& n) {
  if (!n.fits_ulong_p() || n.get_ui() > kFactorLimit)
    throw ResourceError("radius too large to factor exactly: " + n.get_str());
  unsigned long m = n.get_ui();
  std::map<unsigned long, long> out;
  for (unsigned long p = 2; p * p <= m; ++p)
    while (m % p == 0) {
      ++out[p];
      m /= p;
    }
  if (m > 1) ++out[m];
  return out;
}

}  // namespace

ExactPower ExactPower::power(const Rational& base, const Rational& exponent) {
  if (sgn(base) <= 0) throw ContractViolation("power base must be positive");
  ExactPower out(Rational(1));
  if (sgn(exponent) == 0) return out;
  for (const auto& [p, k] : factorize(base.get_num())) out.primes_[p] += Rational(k) * exponent;
  for (const auto& [p, k] : factorize(base.get_den())) out.primes_[p] -= Rational(k) * exponent;
  out.normalize();
  return out;
}

ExactPower ExactPower::exp(const Rational& exponent) {
  ExactPower out(Rational(1));
  out.e_exponent_ = exponent;
  return out;
}

void ExactPower::normalize() {
  for (auto it = primes_.begin(); it != primes_.end();) {
    long whole = floor_to_long(it->second);
    if (whole != 0) {
      coeff_ *= rational_pow(Rational(static_cast<long>(it->first)), whole);
      it->second -= whole;
    }
    if (sgn(it->second) == 0) it = primes_.erase(it);
    else ++it;
  }
  if (sgn(coeff_) == 0) {
    primes_.clear();
    e_exponent_ = 0;
  }
}

ExactPower& ExactPower::operator*=(const ExactPower& o) {
  coeff_ *= o.coeff_;
  e_exponent_ += o.e_exponent_;
  for (const auto& [p, q] : o.primes_) primes_[p] += q;
  normalize();
  return *this;
}

bool operator==(const ExactPower& a, const ExactPower& b) {
  return a.coeff_ == b.coeff_ && a.e_exponent_ == b.e_exponent_ && a.primes_ == b.primes_;
}

double ExactPower::to_double() const {
  double v = coeff_.get_d() * std::exp(e_exponent_.get_d());
  for (const auto& [p, q] : primes_) v *= std::pow(static_cast<double>(p), q.get_d());
  return v;
}

std::string ExactPower::to_string() const {
  std::ostringstream os;
  os << coeff_.get_str();
  if (sgn(e_exponent_) != 0) os << "*e^(" << e_exponent_.get_str() << ")";
  for (const auto& [p, q] : primes_) os << "*" << p << "^(" << q.get_str() << ")";
  return os.str();
}

}  // namespace fqft
