#pragma once

#include "fqft/fock.hpp"
#include "fqft/power.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fqft {

enum class VacuumConvention { shifted, explicit_anomaly };

struct Cylinder {
  Rational length;
};
struct Annulus {
  Rational outer;
  Rational inner;
};
struct Disk {
  Rational radius;
};
using Surface = std::variant<Cylinder, Annulus, Disk>;

std::string describe(const Surface& s);

// Unshifted L_0 + L̄_0 eigenvalues read off the assembled Virasoro matrices.
const std::vector<Rational>& energies(const SpacePtr& space);

template <class S>
S real_power(const Rational& base, const Rational& exponent);
template <>
inline ExactPower real_power<ExactPower>(const Rational& base, const Rational& exponent) {
  return ExactPower::power(base, exponent);
}
template <>
inline double real_power<double>(const Rational& base, const Rational& exponent) {
  return std::pow(base.get_d(), exponent.get_d());
}

template <class S>
S exponential(const Rational& x);
template <>
inline ExactPower exponential<ExactPower>(const Rational& x) {
  return ExactPower::exp(x);
}
template <>
inline double exponential<double>(const Rational& x) {
  return std::exp(x.get_d());
}

template <class S>
S lift(const Rational& q) {
  if constexpr (std::is_same_v<S, ExactPower>) return ExactPower(q);
  else return from_rational<S>(q);
}

// Operator-valued (diagonal) for cylinders and annuli; state-valued for disks.
template <class S>
class PartitionFunction {
 public:
  PartitionFunction(Surface surface, SpacePtr space, std::vector<S> values)
      : surface_(std::move(surface)), space_(std::move(space)), values_(std::move(values)) {
    if (values_.size() != space_->dim()) throw ContractViolation("partition function size mismatch");
  }

  const Surface& surface() const { return surface_; }
  const SpacePtr& space() const { return space_; }
  const std::vector<S>& values() const { return values_; }
  bool is_state() const { return std::holds_alternative<Disk>(surface_); }

  PartitionFunction with_entry(std::size_t i, S value) const {
    PartitionFunction out = *this;
    out.values_.at(i) = std::move(value);
    return out;
  }

 private:
  Surface surface_;
  SpacePtr space_;
  std::vector<S> values_;
};

template <class S>
PartitionFunction<S> cylinder_pf(const SpacePtr& space, const Rational& length,
                                 VacuumConvention convention = VacuumConvention::shifted) {
  (void)convention;
  if (sgn(length) <= 0) throw ContractViolation("cylinder length must be positive");
  const auto& e = energies(space);
  std::vector<S> values;
  values.reserve(e.size());
  for (const auto& energy : e) values.push_back(exponential<S>(-length * energy));
  return {Cylinder{length}, space, std::move(values)};
}

template <class S>
PartitionFunction<S> annulus_pf(const SpacePtr& space, const Rational& outer, const Rational& inner,
                                VacuumConvention convention = VacuumConvention::shifted) {
  if (!(sgn(inner) > 0 && inner <= outer)) throw ContractViolation("annulus requires R >= r > 0");
  const Rational anomaly = convention == VacuumConvention::explicit_anomaly ? Rational(1, 12) : Rational(0);
  const Rational ratio = inner / outer;
  const auto& e = energies(space);
  std::vector<S> values;
  values.reserve(e.size());
  for (const auto& energy : e) values.push_back(real_power<S>(ratio, energy + anomaly));
  return {Annulus{outer, inner}, space, std::move(values)};
}

template <class S>
PartitionFunction<S> disk_pf(const SpacePtr& space, const Rational& radius,
                             VacuumConvention convention = VacuumConvention::shifted) {
  if (sgn(radius) <= 0) throw ContractViolation("disk radius must be positive");
  std::vector<S> values(space->dim(), lift<S>(Rational(0)));
  values[0] = convention == VacuumConvention::explicit_anomaly ? real_power<S>(radius, Rational(-1, 12))
                                                               : lift<S>(Rational(1));
  return {Disk{radius}, space, std::move(values)};
}

Surface glued_surface(const Surface& outer, const Surface& inner);

template <class S>
PartitionFunction<S> glue(const PartitionFunction<S>& outer, const PartitionFunction<S>& inner) {
  require_same_space(outer.space(), inner.space());
  if (outer.is_state()) throw ContractViolation("outer surface of a gluing must have an inner boundary");
  Surface result = glued_surface(outer.surface(), inner.surface());
  std::vector<S> values;
  values.reserve(outer.values().size());
  for (std::size_t i = 0; i < outer.values().size(); ++i) values.push_back(outer.values()[i] * inner.values()[i]);
  return {std::move(result), outer.space(), std::move(values)};
}

template <class S>
std::vector<S> glue(const PartitionFunction<S>& outer, const std::vector<S>& state) {
  if (outer.is_state()) throw ContractViolation("cannot glue a state into a disk");
  if (state.size() != outer.values().size()) throw ContractViolation("space mismatch");
  std::vector<S> out;
  out.reserve(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) out.push_back(outer.values()[i] * state[i]);
  return out;
}

// Disjoint union as a block tensor: diagonal of the Kronecker product.
template <class S>
struct DisjointUnion {
  std::vector<Surface> components;
  std::vector<std::size_t> dims;
  std::vector<S> diagonal;
};

template <class S>
DisjointUnion<S> disjoint_union(const PartitionFunction<S>& a, const PartitionFunction<S>& b) {
  DisjointUnion<S> out{{a.surface(), b.surface()}, {a.values().size(), b.values().size()}, {}};
  out.diagonal.reserve(a.values().size() * b.values().size());
  for (const auto& x : a.values())
    for (const auto& y : b.values()) out.diagonal.push_back(x * y);
  return out;
}

template <class S>
DisjointUnion<S> glue(const DisjointUnion<S>& outer, const DisjointUnion<S>& inner) {
  if (outer.dims != inner.dims) throw ContractViolation("space mismatch");
  DisjointUnion<S> out{{}, outer.dims, {}};
  for (std::size_t k = 0; k < outer.components.size(); ++k)
    out.components.push_back(glued_surface(outer.components[k], inner.components[k]));
  for (std::size_t i = 0; i < outer.diagonal.size(); ++i) out.diagonal.push_back(outer.diagonal[i] * inner.diagonal[i]);
  return out;
}

struct CuttingCheck {
  std::string description;
  double residual = 0;
  bool exact_match = true;
  std::optional<std::size_t> offending_index;
};

struct CuttingReport {
  std::vector<CuttingCheck> checks;
  double max_residual = 0;
  bool exact = false;
  std::optional<std::size_t> offending_index;
  std::string offending_label;

  bool passed(double tolerance) const;
};

template <class S>
struct PfFamily {
  std::function<PartitionFunction<S>(const Rational& outer, const Rational& inner)> segment;
  std::function<PartitionFunction<S>(const Rational& at)> cap;  // optional disk closing the innermost cut
};

CuttingCheck compare_entries(const std::vector<ExactPower>& glued, const std::vector<ExactPower>& direct);
CuttingCheck compare_entries(const std::vector<double>& glued, const std::vector<double>& direct);

// Cut points are ordered from the outermost boundary inwards.
template <class S>
CuttingReport verify_cutting(const PfFamily<S>& family, const std::vector<Rational>& cut_points) {
  CuttingReport report;
  report.exact = std::is_same_v<S, ExactPower>;
  SpacePtr space;
  auto record = [&](CuttingCheck check) {
    report.max_residual = std::max(report.max_residual, check.residual);
    if (!check.exact_match && !report.offending_index && check.offending_index) {
      report.offending_index = check.offending_index;
      if (space) report.offending_label = space->state(*check.offending_index).label();
    }
    report.checks.push_back(std::move(check));
  };
  const std::size_t n = cut_points.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 2; k < n; ++k) {
      auto direct = family.segment(cut_points[i], cut_points[k]);
      space = direct.space();
      for (std::size_t m = i + 1; m < k; ++m) {
        auto glued = glue(family.segment(cut_points[i], cut_points[m]), family.segment(cut_points[m], cut_points[k]));
        auto check = compare_entries(glued.values(), direct.values());
        check.description = describe(glued.surface()) + " split at " + to_string(cut_points[m]);
        record(std::move(check));
      }
    }
  if (family.cap)
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t k = i + 1; k < n; ++k) {
        auto direct = family.cap(cut_points[i]);
        space = direct.space();
        auto glued = glue(family.segment(cut_points[i], cut_points[k]), family.cap(cut_points[k]));
        auto check = compare_entries(glued.values(), direct.values());
        check.description = describe(direct.surface()) + " capped at " + to_string(cut_points[k]);
        record(std::move(check));
      }
  return report;
}

template <class S>
PfFamily<S> annulus_family(const SpacePtr& space, VacuumConvention convention = VacuumConvention::shifted) {
  return {[=](const Rational& o, const Rational& i) { return annulus_pf<S>(space, o, i, convention); },
          [=](const Rational& at) { return disk_pf<S>(space, at, convention); }};
}

template <class S>
PfFamily<S> cylinder_family(const SpacePtr& space) {
  return {[=](const Rational& o, const Rational& i) { return cylinder_pf<S>(space, o - i); }, {}};
}

}  // namespace fqft
