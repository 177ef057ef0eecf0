#include "fqft/free_boson.hpp"

namespace fqft {

std::string CoefficientTraits<RExpansion<Rational>>::format(const RExpansion<Rational>& t) {
  std::string out;
  for (const auto& [k, w] : t.terms()) {
    std::string state;
    for (std::size_t i = 0; i < w.dim(); ++i) {
      if (is_zero(w[i])) continue;
      if (!state.empty()) state += " + ";
      state += to_string(w[i]) + "*" + w.space()->state(i).label();
    }
    if (!out.empty()) out += " + ";
    out += "r^" + to_string(k.p) + (k.q ? "*log(r)^" + std::to_string(k.q) : "") + "*(" + state + ")";
  }
  return out.empty() ? "0" : out;
}

OpeExtraction<Rational> free_boson_marginal_ope(const SpacePtr& space) {
  const auto obs = named_observable<Rational>(space, kMarginalLabel);
  return ope_extract(obs, obs);
}

OpeTable free_boson_table(const SpacePtr& space) {
  OpeTable table;
  table.add_primary({"1", 0, 0});
  table.add_primary({kMarginalLabel, 1, 1});
  table.set_mixing("1", kMarginalLabel, 1);
  for (const auto& row : free_boson_marginal_ope(space).rows)
    table.set_coefficient({kMarginalLabel, kMarginalLabel, "1", row.target_state.chiral, row.target_state.antichiral},
                          row.coefficient);
  table.validate();
  return table;
}

FockBasisState fock_state(const FormalLabel& label) {
  if (label.primary == "1") return {label.mu, label.mubar};
  if (label.primary == kMarginalLabel && label.mu.empty() && label.mubar.empty()) return observable_state(kMarginalLabel);
  throw ValidationError("label " + label.to_string() + " has no free-boson representative");
}

RExpansion<Rational> to_fock(const SpacePtr& space, const FormalState& family) {
  RExpansion<Rational> out(space);
  for (const auto& [label, coeff] : family.terms()) {
    const auto state = BoundaryState<Rational>::basis(space, fock_state(label));
    for (const auto& [mono, c] : coeff.terms()) {
      AtomPower rp{0, 0};
      for (const auto& [symbol, ap] : mono) {
        if (symbol != kInner) throw ValidationError("free-boson family depends on " + symbol);
        rp = ap;
      }
      out.add(rp.power, rp.log_power, c * state);
    }
  }
  return out;
}

namespace {

// Termwise ∫ over D_R∖D_r of a z-series whose coefficients sit at r^p log(r)^q.
void integrate_annulus(RExpansion<Rational>& out, const PointSeries<BoundaryState<Rational>>& series, const Rational& p,
                       int q, const Rational& radius) {
  for (const auto& [ab, w] : series.terms()) {
    if (ab.first != ab.second || w.is_zero()) continue;
    const long e = 2L * ab.first + 2;
    if (e == 0) {
      if (radius != 1) throw Unsupported("log(R) with R != 1 is not representable in exact arithmetic");
      out.add(p, q + 1, Rational(-1) * w);
      continue;
    }
    out.add(p, q, (rational_pow(radius, e) / e) * w);
    out.add(p + e, q, (Rational(-1) / e) * w);
  }
}

RExpansion<Rational> insertion(const SpacePtr& space, const Rational& radius, const RExpansion<Rational>& family) {
  const auto source = BoundaryState<Rational>::basis(space, observable_state(kMarginalLabel));
  const auto& e = energies(space);
  RExpansion<Rational> out(space);
  for (const auto& [k, w] : family.terms()) {
    std::map<Rational, BoundaryState<Rational>> by_energy;
    for (std::size_t i = 0; i < w.dim(); ++i)
      if (!is_zero(w[i])) by_energy.try_emplace(e[i], BoundaryState<Rational>(space)).first->second[i] = w[i];
    for (const auto& [energy, ket] : by_energy)
      integrate_annulus(out, transport<Rational>(source, ket, radius), k.p + energy, k.q, radius);
  }
  return out;
}

}  // namespace

BoundaryState<Rational> marginal_disk_integral(const SpacePtr& space, const Rational& radius) {
  const auto obs = named_observable<Rational>(space, kMarginalLabel);
  BoundaryState<Rational> out(space);
  const auto series = one_point(obs, radius);
  for (const auto& [ab, w] : series.terms()) {
    if (ab.first != ab.second) continue;
    const long e = 2L * ab.first + 2;
    out += (rational_pow(radius, e) / e) * w;
  }
  return out;
}

Jet<RExpansion<Rational>> deformed_disk(const SpacePtr& space, const Rational& radius) {
  Jet<RExpansion<Rational>> out(first_order_algebra({kMarginalLabel}));
  out.add({}, RExpansion<Rational>::monomial(0, 0, BoundaryState<Rational>::vacuum(space)));
  out.add({g_symbol(kMarginalLabel)}, RExpansion<Rational>::monomial(0, 0, marginal_disk_integral(space, radius)));
  return out;
}

Jet<RExpansion<Rational>> deformed_annulus_apply(const SpacePtr& space, const Rational& radius,
                                                 const Jet<RExpansion<Rational>>& family) {
  const SymbolicAnnulus ambient{space, radius};
  Jet<RExpansion<Rational>> out(family.algebra());
  for (const auto& [m, v] : family.terms()) {
    out.add(m, insert_family(ambient, v));
    if (m.empty()) out.add({g_symbol(kMarginalLabel)}, insertion(space, radius, v));
  }
  return out;
}

Jet<RExpansion<Rational>> free_boson_deformed_family(const SpacePtr& space, SubtractionScheme scheme) {
  const FormalTheory theory(free_boson_table(space));
  Jet<RExpansion<Rational>> out(first_order_algebra({kMarginalLabel}));
  out.add({}, named_observable<Rational>(space, kMarginalLabel).representative);
  out.add({g_symbol(kMarginalLabel)},
          to_fock(space, compute_correction(theory, kMarginalLabel, kMarginalLabel, scheme).expansion));
  return out;
}

}  // namespace fqft
