#pragma once

#include "fqft/fock.hpp"

#include <vector>

namespace fqft {

// One term z^{z_power} z̄^{zbar_power} c·e_out of Y(source, z) applied to a basis ket.
struct VertexTerm {
  int z_power;
  int zbar_power;
  std::size_t out;
  Rational coeff;
};

// Mode expansion of the normal-ordered field attached to a current-mode monomial:
// j_{-s} ↦ ∂^{s-1}J/(s-1)! with J(z) = Σ j_n z^{-n-1}, and likewise for the antichiral side.
std::vector<VertexTerm> vertex_action(const SpacePtr& space, const FockBasisState& source, const FockBasisState& ket);

// Generalized binomial coefficient for integer top and k ≥ 0.
Rational binomial(long top, long k);
Rational binomial(const Rational& top, long k);

}  // namespace fqft
