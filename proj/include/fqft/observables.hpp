#pragma once

#include "fqft/fock.hpp"
#include "fqft/geometry.hpp"
#include "fqft/vertex.hpp"

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fqft {

// r^p · log(r)^q
struct RKey {
  Rational p;
  int q = 0;

  friend bool operator==(const RKey& a, const RKey& b) { return a.p == b.p && a.q == b.q; }
  friend bool operator<(const RKey& a, const RKey& b) { return a.p < b.p || (a.p == b.p && a.q < b.q); }
};

template <class S>
class RExpansion {
 public:
  RExpansion() = default;
  explicit RExpansion(SpacePtr space) : space_(std::move(space)) {}

  static RExpansion monomial(const Rational& p, int q, BoundaryState<S> w) {
    RExpansion e(w.space());
    e.add(p, q, w);
    return e;
  }

  const SpacePtr& space() const { return space_; }
  const std::map<RKey, BoundaryState<S>>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add(const Rational& p, int q, const BoundaryState<S>& w) {
    if (q < 0) throw ContractViolation("log power must be non-negative");
    if (!space_) space_ = w.space();
    require_same_space(space_, w.space());
    RKey key{p, q};
    auto it = terms_.find(key);
    if (it == terms_.end()) it = terms_.emplace(key, BoundaryState<S>(space_)).first;
    it->second += w;
    if (it->second.is_zero()) terms_.erase(it);
  }

  BoundaryState<S> coefficient(const Rational& p, int q = 0) const {
    auto it = terms_.find(RKey{p, q});
    return it == terms_.end() ? BoundaryState<S>(space_) : it->second;
  }
  BoundaryState<S> constant_term() const { return coefficient(Rational(0), 0); }

  RExpansion& operator+=(const RExpansion& o) {
    for (const auto& [k, w] : o.terms_) add(k.p, k.q, w);
    return *this;
  }
  RExpansion& operator-=(const RExpansion& o) {
    for (const auto& [k, w] : o.terms_) add(k.p, k.q, -w);
    return *this;
  }
  RExpansion& operator*=(const S& s) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= s;
      if (it->second.is_zero()) it = terms_.erase(it);
      else ++it;
    }
    return *this;
  }
  friend RExpansion operator+(RExpansion a, const RExpansion& b) { return a += b; }
  friend RExpansion operator-(RExpansion a, const RExpansion& b) { return a -= b; }
  friend RExpansion operator*(const S& s, RExpansion a) { return a *= s; }

  friend bool operator==(const RExpansion& a, const RExpansion& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (const auto& [k, w] : a.terms_) {
      auto it = b.terms_.find(k);
      if (it == b.terms_.end() || !(it->second == w)) return false;
    }
    return true;
  }

  // Multiplies every term by r^{shift}.
  RExpansion shifted(const Rational& shift) const {
    RExpansion out(space_);
    for (const auto& [k, w] : terms_) out.terms_.emplace(RKey{k.p + shift, k.q}, w);
    return out;
  }

 private:
  SpacePtr space_;
  std::map<RKey, BoundaryState<S>> terms_;
};

struct GoodnessPolicy {
  double relative_tolerance = 1e-9;
};

struct Divergence {
  Rational p;
  int q;
  double norm;
  std::string description;
};

template <class S>
struct LimitResult {
  std::optional<BoundaryState<S>> value;
  std::optional<Divergence> failure;

  bool ok() const { return value.has_value(); }
};

inline bool is_singular(const RKey& k) { return sgn(k.p) < 0 || (sgn(k.p) == 0 && k.q > 0); }

template <class S>
LimitResult<S> limit_r0(const RExpansion<S>& e, const GoodnessPolicy& policy = {}) {
  const BoundaryState<S> constant = e.space() ? e.constant_term() : BoundaryState<S>();
  const double scale = e.space() ? std::max(constant.norm(), 1.0) : 1.0;
  std::optional<Divergence> worst;
  for (const auto& [k, w] : e.terms()) {
    if (!is_singular(k)) continue;
    const double norm = w.norm();
    const bool present = is_exact_v<S> ? !w.is_zero() : norm > policy.relative_tolerance * scale;
    if (!present) continue;
    const bool more_singular = !worst || k.p < worst->p || (k.p == worst->p && k.q > worst->q);
    if (more_singular) {
      std::string what = sgn(k.p) < 0 ? "power divergence r^" + to_string(k.p) : "log divergence";
      if (k.q > 0 && sgn(k.p) < 0) what += " log(r)^" + std::to_string(k.q);
      else if (k.q > 0) what = "log divergence log(r)^" + std::to_string(k.q);
      worst = Divergence{k.p, k.q, norm, what};
    }
  }
  if (worst) return {std::nullopt, worst};
  if (!e.space()) return {std::nullopt, Divergence{0, 0, 0, "empty expansion has no space"}};
  return {constant, std::nullopt};
}

// Annulus D_R∖D_r with symbolic inner radius r.
struct SymbolicAnnulus {
  SpacePtr space;
  Rational outer;
};

template <class S>
RExpansion<S> insert_family(const SymbolicAnnulus& ambient, const RExpansion<S>& family) {
  RExpansion<S> out(ambient.space);
  const auto& e = energies(ambient.space);
  for (const auto& [k, w] : family.terms()) {
    require_same_space(ambient.space, w.space());
    std::map<Rational, BoundaryState<S>> by_energy;
    for (std::size_t i = 0; i < w.dim(); ++i) {
      if (is_zero(w[i])) continue;
      auto it = by_energy.try_emplace(e[i], BoundaryState<S>(ambient.space)).first;
      it->second[i] = w[i];
    }
    for (auto& [energy, part] : by_energy) {
      if (!is_integer(energy)) throw Unsupported("non-integer energy in symbolic annulus");
      part *= from_rational<S>(rational_pow(ambient.outer, -floor_to_long(energy)));
      out.add(k.p + energy, k.q, part);
    }
  }
  return out;
}

template <class S>
struct GoodFamily {
  RExpansion<S> expansion;
};

template <class S>
GoodFamily<S> certify_good(const SymbolicAnnulus& ambient, const RExpansion<S>& family, const GoodnessPolicy& policy = {}) {
  auto limit = limit_r0(insert_family(ambient, family), policy);
  if (!limit.ok()) throw ValidationError("family is not good: " + limit.failure->description);
  return {family};
}

// Bigraded formal series Σ z^a z̄^b T_{ab}.
template <class T>
class PointSeries {
 public:
  const std::map<std::pair<int, int>, T>& terms() const { return terms_; }
  void add(int a, int b, const T& value) {
    auto it = terms_.find({a, b});
    if (it == terms_.end()) terms_.emplace(std::make_pair(a, b), value);
    else it->second += value;
  }
  const T* find(int a, int b) const {
    auto it = terms_.find({a, b});
    return it == terms_.end() ? nullptr : &it->second;
  }
  bool has_negative_powers() const {
    for (const auto& [k, v] : terms_)
      if (k.first < 0 || k.second < 0) return true;
    return false;
  }

 private:
  std::map<std::pair<int, int>, T> terms_;
};

template <class S>
struct LocalObservable {
  std::string label;
  RExpansion<S> representative;
  std::optional<std::pair<Rational, Rational>> dims;
  std::optional<BoundaryState<Rational>> source;  // w with representative r^{-L0-L̄0} w
};

std::optional<std::pair<Rational, Rational>> bidegree(const BoundaryState<Rational>& w);

template <class S>
LocalObservable<S> observable_from_state(const std::string& label, const BoundaryState<Rational>& w) {
  RExpansion<S> rep(w.space());
  std::map<int, BoundaryState<S>> by_level;
  for (std::size_t i = 0; i < w.dim(); ++i) {
    if (is_zero(w[i])) continue;
    auto it = by_level.try_emplace(w.space()->level(i), BoundaryState<S>(w.space())).first;
    it->second[i] = from_rational<S>(w[i]);
  }
  for (const auto& [level, part] : by_level) rep.add(Rational(-level), 0, part);
  return {label, std::move(rep), bidegree(w), w};
}

// Named observables "1", "j", "jbar", "jjbar", or any basis label such as "j[2,1]jbar[1]".
FockBasisState observable_state(const std::string& name);

template <class S>
LocalObservable<S> named_observable(const SpacePtr& space, const std::string& name) {
  const FockBasisState s = observable_state(name);
  if (!space->find(s)) throw ResourceError("observable " + name + " lies above the truncation level");
  return observable_from_state<S>(name, BoundaryState<Rational>::basis(space, s));
}

template <class S>
RExpansion<S> dilation(const Rational& lambda, const RExpansion<S>& family) {
  if (sgn(lambda) <= 0) throw ContractViolation("dilation scale must be positive");
  RExpansion<S> out(family.space());
  const auto& e = energies(family.space());
  for (const auto& [k, w] : family.terms()) {
    BoundaryState<S> scaled = w;
    for (std::size_t i = 0; i < w.dim(); ++i)
      if (!is_zero(w[i])) scaled[i] *= from_rational<S>(rational_pow(lambda, -floor_to_long(e[i])));
    out.add(k.p, k.q, scaled);
  }
  return out;
}

struct ScalingDimension {
  Rational delta;
  bool logarithmic = false;
};

template <class S>
ScalingDimension scaling_dimension(const LocalObservable<S>& obs, const GoodnessPolicy& policy = {}) {
  const auto& rep = obs.representative;
  if (rep.empty()) throw ContractViolation("null representative has no scaling dimension");
  const auto& e = energies(rep.space());
  std::optional<Rational> level;
  for (const auto& [k, w] : rep.terms())
    for (std::size_t i = 0; i < w.dim(); ++i) {
      if (is_zero(w[i])) continue;
      if (level && *level != e[i]) throw ContractViolation("dilation acts non-diagonally on " + obs.label);
      level = e[i];
    }
  // Confirm the eigen-relation Dil_λ v = λ^{-Δ} v at λ = 2.
  const Rational lambda(2);
  auto diff = dilation(lambda, rep) - from_rational<S>(rational_pow(lambda, -floor_to_long(*level))) * rep;
  for (const auto& [k, w] : diff.terms()) {
    const bool present = is_exact_v<S> ? !w.is_zero() : w.norm() > policy.relative_tolerance;
    if (present) throw ContractViolation("dilation eigen-relation fails for " + obs.label);
  }
  return {*level, false};
}

enum class DescendantModes { u1, virasoro };

template <class S>
LocalObservable<S> descendant_family(const LocalObservable<S>& obs, const Partition& mu, const Partition& mubar,
                                     DescendantModes modes = DescendantModes::u1) {
  const SpacePtr& space = obs.representative.space();
  std::vector<ModeOperator> ops;
  for (int m : mu.parts())
    ops.push_back(modes == DescendantModes::u1 ? build_mode(space, ModeKind::j, -m)
                                               : build_virasoro(space, -m, false, ModeKind::L));
  for (int m : mubar.parts())
    ops.push_back(modes == DescendantModes::u1 ? build_mode(space, ModeKind::jbar, -m)
                                               : build_virasoro(space, -m, false, ModeKind::Lbar));
  auto act = [&](auto w) {
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
      auto r = apply_mode(*it, w);
      if (r.dropped) throw ResourceError("descendant of " + obs.label + " overflows the truncation");
      w = std::move(r.state);
    }
    return w;
  };
  const Rational shift(-(mu.level() + mubar.level()));
  LocalObservable<S> out;
  out.label = obs.label + "^{" + mu.to_string() + "," + mubar.to_string() + "}";
  out.representative = RExpansion<S>(space);
  for (const auto& [k, w] : obs.representative.terms()) out.representative.add(k.p + shift, k.q, act(w));
  if (obs.dims) out.dims = std::make_pair(obs.dims->first + mu.level(), obs.dims->second + mubar.level());
  if (obs.source) out.source = act(*obs.source);
  return out;
}

template <class S>
BoundaryState<S> radial_scale(const BoundaryState<S>& v, const Rational& radius) {
  const auto& e = energies(v.space());
  BoundaryState<S> out = v;
  for (std::size_t i = 0; i < v.dim(); ++i)
    if (!is_zero(v[i])) out[i] *= from_rational<S>(rational_pow(radius, -floor_to_long(e[i])));
  return out;
}

// R^{-L0-L̄0} Y(w_a, z) u as a formal (z, z̄) series on ∂D_R.
template <class S>
PointSeries<BoundaryState<S>> transport(const BoundaryState<Rational>& source, const BoundaryState<S>& ket,
                                        const Rational& radius) {
  const SpacePtr& space = ket.space();
  require_same_space(space, source.space());
  PointSeries<BoundaryState<S>> raw;
  for (std::size_t m = 0; m < source.dim(); ++m) {
    if (is_zero(source[m])) continue;
    for (std::size_t k = 0; k < ket.dim(); ++k) {
      if (is_zero(ket[k])) continue;
      for (const auto& t : vertex_action(space, space->state(m), space->state(k))) {
        BoundaryState<S> piece(space);
        piece[t.out] = from_rational<S>(t.coeff * source[m]) * ket[k];
        raw.add(t.z_power, t.zbar_power, piece);
      }
    }
  }
  PointSeries<BoundaryState<S>> out;
  for (const auto& [ab, v] : raw.terms())
    if (!v.is_zero()) out.add(ab.first, ab.second, radial_scale(v, radius));
  return out;
}

template <class S>
const BoundaryState<Rational>& require_source(const LocalObservable<S>& obs) {
  if (!obs.source)
    throw Unsupported("transport to z != 0 is implemented only for current-mode observables (" + obs.label + ")");
  return *obs.source;
}

template <class S>
PointSeries<BoundaryState<S>> one_point(const LocalObservable<S>& obs, const Rational& radius) {
  const auto& w = require_source(obs);
  return transport<S>(w, BoundaryState<S>::vacuum(w.space()), radius);
}

template <class S>
PointSeries<BoundaryState<S>> two_point(const LocalObservable<S>& at_z, const LocalObservable<S>& at_origin,
                                        const Rational& radius) {
  const auto& wa = require_source(at_z);
  const auto& wb = require_source(at_origin);
  return transport<S>(wa, wb.template cast<S>(), radius);
}

// Evaluates a series at a numeric point 0 < |z| < R.
template <class S>
std::vector<std::complex<double>> evaluate(const PointSeries<BoundaryState<S>>& series, std::complex<double> z,
                                           double radius) {
  if (std::abs(z) >= radius) throw ContractViolation("point outside disk");
  if (z == std::complex<double>(0) && series.has_negative_powers()) throw ContractViolation("collision at z = 0");
  std::vector<std::complex<double>> out;
  for (const auto& [ab, v] : series.terms()) {
    if (out.empty()) out.assign(v.dim(), 0.0);
    const std::complex<double> w = std::pow(z, ab.first) * std::pow(std::conj(z), ab.second);
    for (std::size_t i = 0; i < v.dim(); ++i) out[i] += w * to_double(v[i]);
  }
  return out;
}

template <class S>
struct OpeRow {
  std::string target;
  FockBasisState target_state;
  int z_power;
  int zbar_power;
  S coefficient;
  bool singular;
};

template <class S>
struct OpeExtraction {
  std::string a, b;
  std::vector<OpeRow<S>> rows;
  std::size_t singular_rows = 0;
  double max_residual = 0;                               // relative residual of the span solves
  std::vector<std::pair<std::pair<int, int>, double>> unmatched;  // exponents left beyond max_order
};

struct OpeOptions {
  Rational radius{1};
  int max_order = -1;  // highest target level matched; defaults to l_max
  double residual_tolerance = 1e-8;
};

inline bool singular_exponent(int a, int b) { return a + b < 0 || (a + b == 0 && a != 0); }

// Least squares / exact solve of target = Σ_t C_t ⟨O_t(0)⟩_{D_R} over the given candidate basis states.
std::vector<Rational> solve_in_span(const std::vector<BoundaryState<Rational>>& columns,
                                    const BoundaryState<Rational>& target, double& relative_residual);
std::vector<double> solve_in_span(const std::vector<BoundaryState<double>>& columns, const BoundaryState<double>& target,
                                  double& relative_residual);

template <class S>
OpeExtraction<S> ope_extract(const LocalObservable<S>& a, const LocalObservable<S>& b, const OpeOptions& options = {}) {
  const SpacePtr& space = a.representative.space();
  const int max_order = options.max_order < 0 ? space->l_max() : options.max_order;
  if (!a.dims || !b.dims) throw ContractViolation("ope_extract requires observables of definite bidegree");
  auto series = two_point(a, b, options.radius);

  std::vector<std::pair<int, int>> order;
  for (const auto& [ab, v] : series.terms()) order.push_back(ab);
  std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
    return std::make_pair(x.first + x.second, x.first) < std::make_pair(y.first + y.second, y.first);
  });

  OpeExtraction<S> out{a.label, b.label, {}, 0, 0, {}};
  for (const auto& ab : order) {
    BoundaryState<S> remainder = *series.find(ab.first, ab.second);
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < space->dim(); ++i)
      if (!is_zero(remainder[i]) && space->level(i) <= max_order) candidates.push_back(i);
    bool beyond = false;
    for (std::size_t i = 0; i < space->dim(); ++i)
      if (!is_zero(remainder[i]) && space->level(i) > max_order) beyond = true;
    if (beyond && candidates.empty()) {
      out.unmatched.push_back({ab, remainder.norm()});
      continue;
    }
    std::vector<BoundaryState<S>> columns;
    for (auto i : candidates) columns.push_back(radial_scale(BoundaryState<S>::basis(space, i), options.radius));
    double residual = 0;
    auto coeffs = solve_in_span(columns, remainder, residual);
    if (!beyond && residual > options.residual_tolerance)
      throw ExtractionFailure("coefficient of z^" + std::to_string(ab.first) + " zbar^" + std::to_string(ab.second) +
                                  " is not in the span of known correlators",
                              residual);
    out.max_residual = std::max(out.max_residual, beyond ? 0.0 : residual);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (is_zero(coeffs[c])) continue;
      const FockBasisState& t = space->state(candidates[c]);
      const Rational h_t = t.chiral.level(), hb_t = t.antichiral.level();
      if (h_t - a.dims->first - b.dims->first != ab.first || hb_t - a.dims->second - b.dims->second != ab.second)
        throw ValidationError("exponent bookkeeping mismatch for target " + t.label());
      const bool singular = singular_exponent(ab.first, ab.second);
      out.rows.push_back({t.label(), t, ab.first, ab.second, coeffs[c], singular});
      if (singular) ++out.singular_rows;
      remainder -= coeffs[c] * columns[c];
    }
    if (beyond) out.unmatched.push_back({ab, remainder.norm()});
  }
  return out;
}

// Resums extracted rows into a (z, z̄) series of disk correlators.
template <class S>
PointSeries<BoundaryState<S>> resum(const SpacePtr& space, const std::vector<OpeRow<S>>& rows, const Rational& radius) {
  PointSeries<BoundaryState<S>> out;
  for (const auto& row : rows)
    out.add(row.z_power, row.zbar_power, row.coefficient * radial_scale(BoundaryState<S>::basis(space, row.target_state), radius));
  return out;
}

}  // namespace fqft
