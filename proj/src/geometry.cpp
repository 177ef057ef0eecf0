#include "fqft/geometry.hpp"

#include <mutex>

namespace fqft {

std::string describe(const Surface& s) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Cylinder>) return "cylinder(" + to_string(x.length) + ")";
        else if constexpr (std::is_same_v<T, Annulus>)
          return "annulus(" + to_string(x.outer) + "," + to_string(x.inner) + ")";
        else return "disk(" + to_string(x.radius) + ")";
      },
      s);
}

const std::vector<Rational>& energies(const SpacePtr& space) {
  static std::mutex mutex;
  static std::map<int, std::vector<Rational>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(space->l_max());
  if (it != cache.end()) return it->second;
  const auto l0 = build_virasoro(space, 0, false, ModeKind::L).matrix;
  const auto lb0 = build_virasoro(space, 0, false, ModeKind::Lbar).matrix;
  const auto total = l0 + lb0;
  std::vector<Rational> e(space->dim());
  for (std::size_t c = 0; c < space->dim(); ++c) {
    const auto& column = total.column(c);
    if (column.size() > 1 || (column.size() == 1 && column[0].row != c))
      throw ValidationError("L_0 + Lbar_0 is not diagonal in the partition basis");
    e[c] = column.empty() ? Rational(0) : column[0].value;
  }
  return cache.emplace(space->l_max(), std::move(e)).first->second;
}

Surface glued_surface(const Surface& outer, const Surface& inner) {
  if (const auto* c1 = std::get_if<Cylinder>(&outer)) {
    const auto* c2 = std::get_if<Cylinder>(&inner);
    if (!c2) throw ContractViolation("geometric mismatch: cylinder glued to " + describe(inner));
    return Cylinder{c1->length + c2->length};
  }
  const auto* a = std::get_if<Annulus>(&outer);
  if (!a) throw ContractViolation("geometric mismatch: disk has no inner boundary");
  if (const auto* a2 = std::get_if<Annulus>(&inner)) {
    if (a->inner != a2->outer) throw ContractViolation("geometric mismatch: radii " + describe(outer) + " vs " + describe(inner));
    return Annulus{a->outer, a2->inner};
  }
  if (const auto* d = std::get_if<Disk>(&inner)) {
    if (a->inner != d->radius) throw ContractViolation("geometric mismatch: radii " + describe(outer) + " vs " + describe(inner));
    return Disk{a->outer};
  }
  throw ContractViolation("geometric mismatch: annulus glued to " + describe(inner));
}

CuttingCheck compare_entries(const std::vector<ExactPower>& glued, const std::vector<ExactPower>& direct) {
  CuttingCheck check;
  for (std::size_t i = 0; i < glued.size(); ++i) {
    if (glued[i] == direct[i]) continue;
    double diff = std::fabs(glued[i].to_double() - direct[i].to_double());
    if (check.exact_match) check.offending_index = i;
    check.exact_match = false;
    check.residual = std::max(check.residual, diff > 0 ? diff : std::numeric_limits<double>::min());
  }
  return check;
}

CuttingCheck compare_entries(const std::vector<double>& glued, const std::vector<double>& direct) {
  CuttingCheck check;
  double worst = 0;
  for (std::size_t i = 0; i < glued.size(); ++i) {
    double diff = std::fabs(glued[i] - direct[i]);
    if (diff > worst) {
      worst = diff;
      check.offending_index = i;
    }
  }
  check.residual = worst;
  check.exact_match = worst == 0;
  if (worst == 0) check.offending_index.reset();
  return check;
}

bool CuttingReport::passed(double tolerance) const {
  if (exact) {
    for (const auto& c : checks)
      if (!c.exact_match) return false;
    return true;
  }
  return max_residual < tolerance;
}

}  // namespace fqft
