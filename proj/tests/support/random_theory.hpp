#pragma once

#include "fqft/ope.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

namespace fqft::testing {

inline Rational random_rational(std::mt19937_64& rng, int span = 7, int max_den = 5) {
  std::uniform_int_distribution<int> num(-span, span), den(1, max_den);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline Rational nonzero_rational(std::mt19937_64& rng) {
  for (;;)
    if (auto q = random_rational(rng); !is_zero(q)) return q;
}

struct RandomTheoryShape {
  int marginals = 2;
  int dimension_zero = 1;      // the identity "1" is always present
  bool irrelevant = true;      // adds a (2,2) primary with spinless rows
  bool spin_rows = true;       // adds spinning descendant rows that integrate to zero
  bool symmetric = false;      // rows of (b, a) copy those of (a, b)
  bool complete_mixing = false;  // every dimension-zero primary mixes into some marginal
};

// Random OPE table over marginals m0..m{n-1}, dimension-zero primaries 1, u1, ...
inline OpeTable random_theory(std::mt19937_64& rng, const RandomTheoryShape& shape) {
  std::bernoulli_distribution coin(0.6);
  OpeTable t;
  std::vector<std::string> marg, zero{"1"};
  t.add_primary({"1", 0, 0});
  for (int i = 1; i < shape.dimension_zero; ++i) {
    zero.push_back("u" + std::to_string(i));
    t.add_primary({zero.back(), 0, 0});
  }
  for (int i = 0; i < shape.marginals; ++i) {
    marg.push_back("m" + std::to_string(i));
    t.add_primary({marg.back(), 1, 1});
  }
  if (shape.irrelevant) t.add_primary({"s", 2, 2});
  const Partition one({1});
  for (const auto& a : marg)
    for (const auto& b : marg) {
      if (shape.symmetric && b < a) continue;
      t.set_coefficient({a, b, "1", {}, {}}, Rational(0));
      for (const auto& c : marg)
        if (coin(rng)) t.set_coefficient({a, b, c, {}, {}}, random_rational(rng));
      for (const auto& z : zero) {
        if (coin(rng)) t.set_coefficient({a, b, z, {}, {}}, random_rational(rng));
        if (coin(rng)) t.set_coefficient({a, b, z, one, one}, random_rational(rng));
      }
      if (shape.irrelevant && coin(rng)) t.set_coefficient({a, b, "s", {}, {}}, random_rational(rng));
      if (shape.spin_rows && coin(rng)) t.set_coefficient({a, b, "1", Partition({2}), {}}, random_rational(rng));
    }
  if (shape.symmetric)
    for (const auto& [key, value] : std::map(t.coefficients()))
      if (key.a < key.b) t.set_coefficient({key.b, key.a, key.c, key.mu, key.mubar}, value);
  for (const auto& z : zero)
    for (const auto& m : marg)
      if (coin(rng)) t.set_mixing(z, m, random_rational(rng));
  if (shape.complete_mixing && !marg.empty())
    for (const auto& z : zero) t.set_mixing(z, marg.front(), nonzero_rational(rng));
  t.validate();
  return t;
}

}  // namespace fqft::testing
