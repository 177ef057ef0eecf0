#pragma once

#include "fqft/formal.hpp"
#include "fqft/jet.hpp"
#include "fqft/observables.hpp"
#include "fqft/ope.hpp"

#include <string>

namespace fqft {

inline const std::string kMarginalLabel = "jjbar";

template <>
struct CoefficientTraits<RExpansion<Rational>> {
  static bool zero(const RExpansion<Rational>& t) { return t.empty(); }
  static RExpansion<Rational> scale(const RExpansion<Rational>& t, const Rational& q) { return q * t; }
  static bool equal(const RExpansion<Rational>& a, const RExpansion<Rational>& b, double) { return a == b; }
  static std::string format(const RExpansion<Rational>& t);
};

// Successive-subtraction OPE of the marginal j j̄ with itself.
OpeExtraction<Rational> free_boson_marginal_ope(const SpacePtr& space);

// OPE data in the formal schema: primaries 1 and j j̄, descendants labelled by U(1) partitions,
// and the mixing 1^{[1],[1]} = j j̄.
OpeTable free_boson_table(const SpacePtr& space);

FockBasisState fock_state(const FormalLabel& label);
// Maps a formal family (coefficients in r only) into the Fock basis.
RExpansion<Rational> to_fock(const SpacePtr& space, const FormalState& family);

// ∫_{D_R} ⟨j j̄(z)⟩_{D_R} and the first-order deformed disk |0⟩ + g ∫⟨j j̄⟩.
BoundaryState<Rational> marginal_disk_integral(const SpacePtr& space, const Rational& radius);
Jet<RExpansion<Rational>> deformed_disk(const SpacePtr& space, const Rational& radius);

// ⟨⟩^{def}_{D_R∖D_r} applied to a family at the inner boundary, with r symbolic.
Jet<RExpansion<Rational>> deformed_annulus_apply(const SpacePtr& space, const Rational& radius,
                                                 const Jet<RExpansion<Rational>>& family);

// v + g·δv for the marginal, with δv taken from the extracted OPE.
Jet<RExpansion<Rational>> free_boson_deformed_family(const SpacePtr& space, SubtractionScheme scheme);

}  // namespace fqft
