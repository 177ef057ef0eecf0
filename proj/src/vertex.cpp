#include "fqft/vertex.hpp"

namespace fqft {

Rational binomial(const Rational& top, long k) {
  if (k < 0) return 0;
  Rational out(1);
  for (long i = 0; i < k; ++i) out *= (top - i) / Rational(i + 1);
  return out;
}

Rational binomial(long top, long k) { return binomial(Rational(top), k); }

namespace {

struct SideTerm {
  int power;
  Partition out;
  Rational coeff;
};

// Enumerates mode choices n_i for each factor; annihilators act first, creators last.
void enumerate_side(const std::vector<int>& factors, std::size_t i, const Partition& ket, int cap,
                    std::vector<int>& modes, int annihilated, int created, std::vector<SideTerm>& out) {
  if (i == factors.size()) {
    Partition state = ket;
    Rational coeff(1);
    int power = 0;
    for (std::size_t f = 0; f < factors.size(); ++f) {
      const int n = modes[f];
      coeff *= binomial(static_cast<long>(-n - 1), factors[f] - 1);
      power += -n - factors[f];
    }
    if (is_zero(coeff)) return;
    for (std::size_t f = 0; f < factors.size(); ++f) {
      const int n = modes[f];
      if (n <= 0) continue;
      const int mult = state.multiplicity(n);
      if (mult == 0) return;
      coeff *= n * mult;
      state = state.without_part(n);
    }
    for (std::size_t f = 0; f < factors.size(); ++f)
      if (modes[f] < 0) state = state.with_part(-modes[f]);
    out.push_back({power, std::move(state), std::move(coeff)});
    return;
  }
  const int remaining_annihilation = ket.level() - annihilated;
  for (int n = 1; n <= remaining_annihilation; ++n) {
    modes[i] = n;
    enumerate_side(factors, i + 1, ket, cap, modes, annihilated + n, created, out);
  }
  for (int n = 1; n <= cap - created; ++n) {
    modes[i] = -n;
    enumerate_side(factors, i + 1, ket, cap, modes, annihilated, created + n, out);
  }
}

std::vector<SideTerm> side_terms(const Partition& source, const Partition& ket, int cap) {
  std::vector<SideTerm> raw;
  std::vector<int> modes(source.size(), 0);
  enumerate_side(source.parts(), 0, ket, cap, modes, 0, 0, raw);
  std::map<std::pair<int, Partition>, Rational> merged;
  for (auto& t : raw)
    if (t.out.level() <= cap) merged[{t.power, t.out}] += t.coeff;
  std::vector<SideTerm> out;
  for (auto& [key, c] : merged)
    if (!is_zero(c)) out.push_back({key.first, key.second, c});
  return out;
}

}  // namespace

std::vector<VertexTerm> vertex_action(const SpacePtr& space, const FockBasisState& source, const FockBasisState& ket) {
  const int cap = space->l_max();
  const auto chiral = side_terms(source.chiral, ket.chiral, cap);
  const auto antichiral = side_terms(source.antichiral, ket.antichiral, cap);
  std::vector<VertexTerm> out;
  for (const auto& c : chiral)
    for (const auto& a : antichiral) {
      if (c.out.level() + a.out.level() > cap) continue;
      out.push_back({c.power, a.power, space->index_of({c.out, a.out}), c.coeff * a.coeff});
    }
  return out;
}

}  // namespace fqft
