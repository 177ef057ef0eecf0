#include "fqft/formal.hpp"

#include "fqft/vertex.hpp"

#include <sstream>

namespace fqft {

std::string FormalLabel::to_string() const {
  if (mu.empty() && mubar.empty()) return primary;
  return primary + "^{" + mu.to_string() + "," + mubar.to_string() + "}";
}

FormalState FormalState::basis(FormalLabel label, SymExpr coeff) {
  FormalState s;
  s.add(label, coeff);
  return s;
}

SymExpr FormalState::coefficient(const FormalLabel& label) const {
  auto it = terms_.find(label);
  return it == terms_.end() ? SymExpr() : it->second;
}

void FormalState::add(const FormalLabel& label, const SymExpr& coeff) {
  if (coeff.is_zero()) return;
  auto it = terms_.find(label);
  if (it == terms_.end()) {
    terms_.emplace(label, coeff);
    return;
  }
  it->second += coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

FormalState& FormalState::operator+=(const FormalState& o) {
  for (const auto& [l, c] : o.terms_) add(l, c);
  return *this;
}

FormalState& FormalState::operator-=(const FormalState& o) {
  for (const auto& [l, c] : o.terms_) add(l, -c);
  return *this;
}

FormalState operator*(const SymExpr& s, const FormalState& v) {
  FormalState out;
  for (const auto& [l, c] : v.terms_) out.add(l, s * c);
  return out;
}

std::string FormalState::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [l, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + c.to_string() + ")*e[" + l.to_string() + "]";
  }
  return out;
}

Radius Radius::operator*(const Radius& o) const {
  Radius out = *this;
  for (const auto& [s, p] : o.exponents) out.exponents[s] += p;
  return out;
}

SymExpr Radius::pow(const Rational& p) const {
  SymExpr out(1);
  for (const auto& [s, e] : exponents) out *= SymExpr::power(s, e * p);
  return out;
}

SymExpr Radius::log() const {
  SymExpr out;
  for (const auto& [s, e] : exponents) out += SymExpr(e) * SymExpr::log(s);
  return out;
}

SymExpr annulus_moment(const Rational& a, const Rational& b, const Radius& outer, const Radius& inner) {
  if (a != b) return {};
  if (a == -1) return outer.log() - inner.log();
  const Rational e = 2 * a + 2;
  return SymExpr(1 / e) * (outer.pow(e) - inner.pow(e));
}

FormalTheory::FormalTheory(OpeTable table) : table_(std::move(table)) {
  table_.validate();
  marginals_ = table_.marginals();
}

FormalState FormalTheory::canonical(const FormalLabel& l) const {
  const Partition one({1});
  const auto& p = table_.primary(l.primary);
  if (l.mu == one && l.mubar == one && p.h == 0 && p.hbar == 0) {
    FormalState out;
    for (const auto& [ft, m] : table_.mixing_entries())
      if (ft.first == l.primary) out.add({ft.second, {}, {}}, SymExpr(m));
    if (!out.is_zero()) return out;
  }
  return FormalState::basis(l);
}

FormalState FormalTheory::marginal_family(const std::string& beta) const {
  if (!table_.primary(beta).marginal()) throw ContractViolation(beta + " is not a marginal primary");
  return disk_correlator({beta, {}, {}}, Radius::symbol(kInner));
}

FormalState FormalTheory::disk_correlator(const FormalLabel& l, const Radius& rho) const {
  return rho.pow(-energy(l)) * canonical(l);
}

FormalState FormalTheory::annulus(const FormalState& f, const Radius& outer, const Radius& inner) const {
  return f.transformed([&](const FormalLabel& l, const SymExpr& c) {
    const Rational e = energy(l);
    return inner.pow(e) * outer.pow(-e) * c;
  });
}

FormalState FormalTheory::insertion(const std::string& alpha, const FormalState& f, const Radius& outer,
                                    const Radius& inner) const {
  FormalState out;
  for (const auto& [c, phi] : f.terms()) {
    if (!c.mu.empty() || !c.mubar.empty())
      throw Unsupported("insertion next to the descendant " + c.to_string() + " needs its OPE rows");
    if (!table_.has_rows(alpha, c.primary))
      throw ValidationError("missing OPE rows for (" + alpha + ", " + c.primary + ")");
    const SymExpr prefactor = inner.pow(energy(c)) * phi;
    for (const auto& [key, coeff] : table_.rows(alpha, c.primary)) {
      const auto [a, b] = table_.exponents(key);
      const SymExpr moment = annulus_moment(a, b, outer, inner);
      if (moment.is_zero() || is_zero(coeff)) continue;
      const FormalLabel t{key.c, key.mu, key.mubar};
      out += (SymExpr(coeff) * moment * prefactor * outer.pow(-energy(t))) * canonical(t);
    }
  }
  return out;
}

Jet<FormalState> FormalTheory::deformed_annulus(const Jet<FormalState>& f, const Radius& outer,
                                                const Radius& inner) const {
  Jet<FormalState> out(f.algebra());
  for (const auto& [m, v] : f.terms()) {
    out.add(m, annulus(v, outer, inner));
    if (!m.empty()) continue;
    for (const auto& alpha : marginals_)
      if (f.algebra()->has_symbol(g_symbol(alpha))) out.add({g_symbol(alpha)}, insertion(alpha, v, outer, inner));
  }
  return out;
}

CorrectionTerm compute_correction(const FormalTheory& theory, const std::string& alpha, const std::string& beta,
                                  SubtractionScheme scheme) {
  const auto& table = theory.table();
  if (!table.primary(alpha).marginal() || !table.primary(beta).marginal())
    throw ContractViolation("corrections are defined for marginal pairs");
  if (!table.has_rows(alpha, beta)) throw ValidationError("missing OPE rows for (" + alpha + ", " + beta + ")");
  const Radius r = Radius::symbol(kInner);
  CorrectionTerm out{alpha, beta, {}};
  for (const auto& [key, coeff] : table.rows(alpha, beta)) {
    const auto [a, b] = table.exponents(key);
    if (a != b || is_zero(coeff)) continue;
    const Rational H = a + 2;
    const FormalLabel t{key.c, key.mu, key.mubar};
    if (H == 1) {
      out.expansion += (SymExpr(coeff) * r.log()) * theory.disk_correlator(t, r);
    } else if (scheme == SubtractionScheme::full || H < 1) {
      const Rational d = 2 * (H - 1);
      out.expansion += (SymExpr(coeff / d) * r.pow(d)) * theory.disk_correlator(t, r);
    }
  }
  return out;
}

Jet<FormalState> deformed_family(const FormalTheory& theory, const std::string& beta, SubtractionScheme scheme) {
  Jet<FormalState> out(first_order_algebra(theory.marginals()));
  out.add({}, theory.marginal_family(beta));
  for (const auto& alpha : theory.marginals())
    out.add({g_symbol(alpha)}, compute_correction(theory, alpha, beta, scheme).expansion);
  return out;
}

Jet<FormalState> insert_deformed(const FormalTheory& theory, const Jet<FormalState>& family) {
  return theory.deformed_annulus(family, Radius::symbol(kOuter), Radius::symbol(kInner));
}

std::vector<SingularTerm> singular_terms(const Jet<FormalState>& inserted) {
  std::vector<SingularTerm> out;
  for (const auto& [m, v] : inserted.terms())
    for (const auto& [l, c] : v.terms())
      for (const auto& [mono, q] : c.singular_terms(kInner)) out.push_back({m, l, mono, q});
  return out;
}

Jet<FormalState> limit_inner(const Jet<FormalState>& inserted) {
  Jet<FormalState> out(inserted.algebra());
  for (const auto& [m, v] : inserted.terms())
    out.add(m, v.transformed([&](const FormalLabel& l, const SymExpr& c) {
      auto lim = c.limit_zero(kInner);
      if (!lim) throw ValidationError("family is not good: singular r-term on " + l.to_string());
      return *lim;
    }));
  return out;
}

namespace {

Jet<FormalState> dilate(const FormalTheory& theory, const Jet<FormalState>& family) {
  const Radius r = Radius::symbol(kInner);
  return theory.deformed_annulus(family, Radius::symbol(kScale) * r, r);
}

Jet<FormalState> times(const SymExpr& s, const Jet<FormalState>& j) {
  return j.map([&](const FormalState& v) { return s * v; });
}

}  // namespace

Jet<FormalState> anomalous_dilation(const FormalTheory& theory, const Jet<FormalState>& family) {
  return times(SymExpr::power(kScale, 2), dilate(theory, family));
}

FormalScaling formal_scaling_dimension(const FormalTheory& theory, const Jet<FormalState>& family) {
  const FormalState* leading = family.find({});
  if (!leading || leading->is_zero()) throw ContractViolation("family has no undeformed part");
  std::optional<Rational> delta;
  for (const auto& [l, c] : leading->terms()) {
    if (delta && *delta != theory.energy(l)) throw ContractViolation("undeformed part is not level-homogeneous");
    delta = theory.energy(l);
  }
  const Jet<FormalState> diff = times(SymExpr::power(kScale, *delta), dilate(theory, family)) - family;
  Jet<FormalState> log_part(family.algebra());
  for (const auto& [m, v] : diff.terms())
    log_part.add(m, v.transformed([](const FormalLabel&, const SymExpr& c) { return c.coefficient(kScale, 0, 1); }));
  if (!(times(SymExpr::log(kScale), log_part) == diff))
    throw ContractViolation("dilation acts neither diagonally nor as a Jordan block");
  return {*delta, log_part};
}

std::string CoefficientTraits<FormalSeries>::format(const FormalSeries& t) {
  std::string out;
  for (const auto& [jk, v] : t) {
    if (!out.empty()) out += " + ";
    out += "z^" + std::to_string(jk.first) + "*zbar^" + std::to_string(jk.second) + "*[" + v.to_string() + "]";
  }
  return out.empty() ? "0" : out;
}

FormalSeries operator+(FormalSeries a, const FormalSeries& b) {
  for (const auto& [jk, v] : b) {
    auto& slot = a[jk];
    slot += v;
    if (slot.is_zero()) a.erase(jk);
  }
  return a;
}

namespace {

using Kernel = std::map<std::pair<int, int>, SymExpr>;

void add_kernel(Kernel& k, int j, int kk, const SymExpr& v) {
  if (v.is_zero()) return;
  auto& slot = k[{j, kk}];
  slot += v;
  if (slot.is_zero()) k.erase({j, kk});
}

// Outer-circle residue for b ≠ −1, from Stokes with ∂_w̄[(w̄−z̄)^{b+1}/(b+1)].
Kernel outer_residue(long a, long b, int max_order) {
  Kernel out;
  const long m = b + 1;
  for (int j = 0; j <= max_order; ++j) {
    const long k = j + b - a;
    if (k < 0 || j + k > max_order) continue;
    const Rational c = binomial(a, j) * binomial(m, k) * ((j + k) % 2 == 0 ? 1 : -1) / Rational(2 * m);
    if (is_zero(c)) continue;
    add_kernel(out, j, static_cast<int>(k), SymExpr(c) * SymExpr::power(kOuter, Rational(2 * (m - k))));
  }
  return out;
}

}  // namespace

std::map<std::pair<int, int>, SymExpr> point_kernel(const Rational& a, const Rational& b, int max_order) {
  Kernel out;
  if (!is_integer(a) || !is_integer(b)) {
    if (max_order > 0) throw Unsupported("non-integer exponents are supported only at the origin");
    if (a == b) add_kernel(out, 0, 0, annulus_moment(a, b, Radius::symbol(kOuter), Radius{}));
    return out;
  }
  const long ia = floor_to_long(a), ib = floor_to_long(b);
  if (ia == -1 && ib == -1) {
    add_kernel(out, 0, 0, SymExpr::log(kOuter));
    for (int k = 1; 2 * k <= max_order; ++k)
      add_kernel(out, k, k, SymExpr(Rational(-1, 2 * k)) * SymExpr::power(kOuter, Rational(-2 * k)));
    return out;
  }
  if (ib != -1) return outer_residue(ia, ib, max_order);
  for (const auto& [jk, v] : outer_residue(ib, ia, max_order)) add_kernel(out, jk.second, jk.first, v);
  return out;
}

Jet<FormalSeries> deformed_one_point(const FormalTheory& theory, const std::string& beta, int max_order) {
  Jet<FormalSeries> out(first_order_algebra(theory.marginals()));
  out.add({}, FormalSeries{{{0, 0}, theory.canonical({beta, {}, {}})}});
  const auto& table = theory.table();
  for (const auto& alpha : theory.marginals()) {
    if (!table.has_rows(alpha, beta)) throw ValidationError("missing OPE rows for (" + alpha + ", " + beta + ")");
    FormalSeries series;
    for (const auto& [key, coeff] : table.rows(alpha, beta)) {
      if (is_zero(coeff)) continue;
      const auto [a, b] = table.exponents(key);
      const FormalState target = theory.canonical({key.c, key.mu, key.mubar});
      for (const auto& [jk, f] : point_kernel(a, b, max_order))
        series = series + FormalSeries{{jk, (SymExpr(coeff) * f) * target}};
    }
    out.add({g_symbol(alpha)}, series);
  }
  return out;
}

std::string DiskAtom::to_string() const {
  if (vacuum) return "Z";
  return "M[" + label.to_string() + "," + std::to_string(j) + "," + std::to_string(k) + "]";
}

DiskValue CoefficientTraits<DiskValue>::scale(const DiskValue& t, const Rational& q) {
  DiskValue out;
  if (is_zero(q)) return out;
  for (const auto& [a, v] : t) out[a] = SymExpr(q) * v;
  return out;
}

std::string CoefficientTraits<DiskValue>::format(const DiskValue& t) {
  std::string out;
  for (const auto& [a, v] : t) {
    if (!out.empty()) out += " + ";
    out += "(" + v.to_string() + ")*" + a.to_string();
  }
  return out.empty() ? "0" : out;
}

DiskValue operator+(DiskValue a, const DiskValue& b) {
  for (const auto& [atom, v] : b) {
    auto& slot = a[atom];
    slot += v;
    if (slot.is_zero()) a.erase(atom);
  }
  return a;
}

namespace {

DiskValue integrate(const FormalSeries& series) {
  DiskValue out;
  for (const auto& [jk, state] : series)
    for (const auto& [l, c] : state.terms()) out = out + DiskValue{{DiskAtom{false, l, jk.first, jk.second}, c}};
  return out;
}

DiskValue marginal_integral(const std::string& alpha) { return {{DiskAtom{false, {alpha, {}, {}}, 0, 0}, SymExpr(1)}}; }

}  // namespace

Jet<DiskValue> deform_disk(const FormalTheory& theory) {
  Jet<DiskValue> out(first_order_algebra(theory.marginals()));
  out.add({}, {{DiskAtom{}, SymExpr(1)}});
  for (const auto& alpha : theory.marginals()) out.add({g_symbol(alpha)}, marginal_integral(alpha));
  return out;
}

DoubleDeformation double_deform(const FormalTheory& theory, int max_order) {
  const auto& labels = theory.marginals();
  Jet<DiskValue> expr(double_deformation_algebra(labels));
  expr.add({}, {{DiskAtom{}, SymExpr(1)}});
  for (const auto& alpha : labels) {
    expr.add({g_symbol(alpha)}, marginal_integral(alpha));
    expr.add({gt_symbol(alpha)}, marginal_integral(alpha));
  }
  for (const auto& beta : labels) {
    const auto one_point = deformed_one_point(theory, beta, max_order);
    for (const auto& alpha : labels)
      if (const FormalSeries* f = one_point.find({g_symbol(alpha)}))
        expr.add({gt_symbol(beta), g_symbol(alpha)}, integrate(*f));
  }
  return {expr, recombine(expr, labels)};
}

Jet<DiskValue> rescale_radius(const FormalTheory& theory, const Jet<DiskValue>& pf) {
  return pf.map([&](const DiskValue& v) {
    DiskValue out;
    for (const auto& [atom, c] : v) {
      SymExpr scaled = c.scale_symbol(kOuter, kScale);
      if (!atom.vacuum) scaled *= SymExpr::power(kScale, 2 + atom.j + atom.k - theory.energy(atom.label));
      out = out + DiskValue{{atom, scaled}};
    }
    return out;
  });
}

Jet<DiskValue> log_radius_part(const Jet<DiskValue>& pf) {
  return pf.map([](const DiskValue& v) {
    DiskValue out;
    for (const auto& [atom, c] : v) {
      SymExpr logs;
      for (const auto& [m, q] : c.terms()) {
        auto it = m.find(kOuter);
        if (it != m.end() && it->second.log_power > 0) logs += SymExpr::monomial(q, m);
      }
      out = out + DiskValue{{atom, logs}};
    }
    return out;
  });
}

BetaResult beta(const FormalTheory& theory) {
  BetaResult out;
  out.marginals = theory.marginals();
  auto algebra = combined_algebra(out.marginals);
  for (const auto& gamma : out.marginals) {
    Jet<Rational> b(algebra);
    for (const auto& alpha : out.marginals)
      for (const auto& beta_label : out.marginals) {
        const Rational c = theory.marginal_constant(alpha, beta_label, gamma);
        out.structure_constants[{alpha, beta_label, gamma}] = c;
        b.add({gc_symbol(alpha), gc_symbol(beta_label)}, c / 2);
      }
    Jet<SymExpr> running = Jet<SymExpr>::symbol(algebra, gc_symbol(gamma), SymExpr(1));
    running += b.map([](const Rational& q) { return SymExpr(q) * SymExpr::log(kScale); });
    out.beta.emplace(gamma, std::move(b));
    out.running.emplace(gamma, std::move(running));
  }
  return out;
}

std::map<std::string, Jet<Rational>> beta_from_rescaling(const FormalTheory& theory, const Jet<DiskValue>& pf) {
  std::map<std::string, Jet<Rational>> out;
  for (const auto& gamma : theory.marginals()) out.emplace(gamma, Jet<Rational>(pf.algebra()));
  const auto anomaly = rescale_radius(theory, pf) - pf;
  for (const auto& [m, v] : anomaly.terms())
    for (const auto& [atom, c] : v) {
      if (atom.vacuum || atom.j || atom.k || !atom.label.mu.empty() || !atom.label.mubar.empty()) continue;
      auto it = out.find(atom.label.primary);
      if (it == out.end()) continue;
      const auto q = c.coefficient(kScale, 0, 1).as_constant();
      if (!q) throw ValidationError("log(lambda) coefficient of " + atom.to_string() + " is not a constant");
      it->second.add(m, *q);
    }
  return out;
}

Jet<DiskValue> predicted_anomaly(const FormalTheory& theory, const BetaResult& b) {
  Jet<DiskValue> out(combined_algebra(theory.marginals()));
  for (const auto& [gamma, jet] : b.beta)
    out += jet.map([&](const Rational& q) {
      return DiskValue{{DiskAtom{false, {gamma, {}, {}}, 0, 0}, SymExpr(q) * SymExpr::log(kScale)}};
    });
  return out;
}

}  // namespace fqft
