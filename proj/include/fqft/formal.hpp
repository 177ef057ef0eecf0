#pragma once

#include "fqft/jet.hpp"
#include "fqft/ope.hpp"
#include "fqft/symexpr.hpp"

#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fqft {

// O_c^{μ,μ̄}: a primary label with descendant partitions.
struct FormalLabel {
  std::string primary;
  Partition mu, mubar;

  std::string to_string() const;
  friend bool operator==(const FormalLabel&, const FormalLabel&) = default;
  friend auto operator<=>(const FormalLabel&, const FormalLabel&) = default;
};

// Σ_t f_t e_t, where ⟨O_t(0)⟩_{D_ρ} = ρ^{-E_t} e_t and f_t are power-log expressions.
class FormalState {
 public:
  FormalState() = default;
  static FormalState basis(FormalLabel label, SymExpr coeff = SymExpr(1));

  const std::map<FormalLabel, SymExpr>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  SymExpr coefficient(const FormalLabel& label) const;
  void add(const FormalLabel& label, const SymExpr& coeff);

  FormalState& operator+=(const FormalState& o);
  FormalState& operator-=(const FormalState& o);
  friend FormalState operator+(FormalState a, const FormalState& b) { return a += b; }
  friend FormalState operator-(FormalState a, const FormalState& b) { return a -= b; }
  friend FormalState operator*(const SymExpr& s, const FormalState& v);
  friend bool operator==(const FormalState& a, const FormalState& b) { return a.terms_ == b.terms_; }

  // Applies f to every coefficient.
  template <class F>
  FormalState transformed(F&& f) const {
    FormalState out;
    for (const auto& [l, c] : terms_) out.add(l, f(l, c));
    return out;
  }

  std::string to_string() const;

 private:
  std::map<FormalLabel, SymExpr> terms_;
};

template <>
struct CoefficientTraits<FormalState> {
  static bool zero(const FormalState& t) { return t.is_zero(); }
  static FormalState scale(const FormalState& t, const Rational& q) { return SymExpr(q) * t; }
  static bool equal(const FormalState& a, const FormalState& b, double) { return a == b; }
  static std::string format(const FormalState& t) { return t.to_string(); }
};

// Radius as a monomial in positive symbols, e.g. lambda·r.
struct Radius {
  std::map<std::string, Rational> exponents;

  static Radius symbol(const std::string& name) { return {{{name, Rational(1)}}}; }
  Radius operator*(const Radius& o) const;
  SymExpr pow(const Rational& p) const;
  SymExpr log() const;
};

inline const std::string kInner = "r";
inline const std::string kOuter = "R";
inline const std::string kScale = "lambda";

enum class SubtractionScheme {
  full,     // every spinless non-marginal term of the general formula for a good family
  minimal,  // only terms singular as r → 0, plus the log term
};

// ∫_{D_outer∖D_inner} z^a z̄^b in the flat measure normalized so that ∫ |z|^{-2} = log(outer/inner).
SymExpr annulus_moment(const Rational& a, const Rational& b, const Radius& outer, const Radius& inner);

class FormalTheory {
 public:
  explicit FormalTheory(OpeTable table);

  const OpeTable& table() const { return table_; }
  const std::vector<std::string>& marginals() const { return marginals_; }

  Rational h(const FormalLabel& l) const { return table_.primary(l.primary).h + l.mu.level(); }
  Rational hbar(const FormalLabel& l) const { return table_.primary(l.primary).hbar + l.mubar.level(); }
  Rational energy(const FormalLabel& l) const { return h(l) + hbar(l); }

  // Replaces {1},{1} descendants of dimension-zero primaries by their marginal expansion.
  FormalState canonical(const FormalLabel& l) const;

  // v_{β,r} = r^{-2} e_β.
  FormalState marginal_family(const std::string& beta) const;
  // ⟨O(0)⟩_{D_ρ} for a label, as a state with explicit radius dependence.
  FormalState disk_correlator(const FormalLabel& l, const Radius& rho) const;

  // Undeformed annulus D_outer∖D_inner acting on a state at the inner boundary.
  FormalState annulus(const FormalState& f, const Radius& outer, const Radius& inner) const;
  // First-order insertion ∫ O_α over D_outer∖D_inner acting on a state at the inner boundary.
  FormalState insertion(const std::string& alpha, const FormalState& f, const Radius& outer, const Radius& inner) const;
  // Deformed annulus with couplings g^α applied to a jet-valued family.
  Jet<FormalState> deformed_annulus(const Jet<FormalState>& f, const Radius& outer, const Radius& inner) const;

  Rational marginal_constant(const std::string& a, const std::string& b, const std::string& c) const {
    return table_.marginal_constant(a, b, c);
  }

 private:
  OpeTable table_;
  std::vector<std::string> marginals_;
};

struct CorrectionTerm {
  std::string alpha, beta;
  FormalState expansion;  // δv_{αβ,r}
};

CorrectionTerm compute_correction(const FormalTheory& theory, const std::string& alpha, const std::string& beta,
                                  SubtractionScheme scheme = SubtractionScheme::full);

// ṽ_β = v_β + g^α δv_{αβ}.
Jet<FormalState> deformed_family(const FormalTheory& theory, const std::string& beta,
                                 SubtractionScheme scheme = SubtractionScheme::full);

// Inserts a family into the deformed annulus D_R∖D_r; coefficients are expressions in r and R.
Jet<FormalState> insert_deformed(const FormalTheory& theory, const Jet<FormalState>& family);

struct SingularTerm {
  JetMonomial coupling;
  FormalLabel label;
  SymMonomial monomial;
  Rational coefficient;
};
std::vector<SingularTerm> singular_terms(const Jet<FormalState>& inserted);

// r → 0 limit of an inserted family; throws if singular terms survive.
Jet<FormalState> limit_inner(const Jet<FormalState>& inserted);

// λ²·Dil_λ ṽ with the deformed annulus D_{λr}∖D_r.
Jet<FormalState> anomalous_dilation(const FormalTheory& theory, const Jet<FormalState>& family);

struct FormalScaling {
  Rational delta;
  Jet<FormalState> log_part;  // coefficient of log λ in λ^Δ·Dil_λ ṽ − ṽ
  bool logarithmic() const { return !log_part.is_zero(); }
};
FormalScaling formal_scaling_dimension(const FormalTheory& theory, const Jet<FormalState>& family);

// Σ z^j z̄^k T_{jk} over states, truncated at j + k ≤ max_order.
using FormalSeries = std::map<std::pair<int, int>, FormalState>;

template <>
struct CoefficientTraits<FormalSeries> {
  static bool zero(const FormalSeries& t) { return t.empty(); }
  static FormalSeries scale(const FormalSeries& t, const Rational& q) {
    FormalSeries out;
    if (is_zero(q)) return out;
    for (const auto& [k, v] : t) out[k] = SymExpr(q) * v;
    return out;
  }
  static bool equal(const FormalSeries& a, const FormalSeries& b, double) { return a == b; }
  static std::string format(const FormalSeries& t);
};

FormalSeries operator+(FormalSeries a, const FormalSeries& b);

// F_{ab}(z, z̄; R): r → 0 limit of counterterm plus ∫_{D_R∖D_r(z)} (w−z)^a (w̄−z̄)^b.
std::map<std::pair<int, int>, SymExpr> point_kernel(const Rational& a, const Rational& b, int max_order);

// ⟨Õ_β(z)⟩ on D_R as Σ F(z, z̄; R)^t ⟨O_t(z)⟩_{D_R}, coefficient series per coupling.
Jet<FormalSeries> deformed_one_point(const FormalTheory& theory, const std::string& beta, int max_order);

// Disk integrals ∫_{D_R} z^j z̄^k ⟨O_t(z)⟩_{D_R}, plus the vacuum disk.
struct DiskAtom {
  bool vacuum = true;
  FormalLabel label;
  int j = 0, k = 0;

  std::string to_string() const;
  friend bool operator==(const DiskAtom&, const DiskAtom&) = default;
  friend auto operator<=>(const DiskAtom&, const DiskAtom&) = default;
};

using DiskValue = std::map<DiskAtom, SymExpr>;

template <>
struct CoefficientTraits<DiskValue> {
  static bool zero(const DiskValue& t) { return t.empty(); }
  static DiskValue scale(const DiskValue& t, const Rational& q);
  static bool equal(const DiskValue& a, const DiskValue& b, double) { return a == b; }
  static std::string format(const DiskValue& t);
};

DiskValue operator+(DiskValue a, const DiskValue& b);

// First-order deformed disk: vacuum + g^α ∫⟨O_α⟩.
Jet<DiskValue> deform_disk(const FormalTheory& theory);

struct DoubleDeformation {
  Jet<DiskValue> before_recombination;  // over g, g̃
  Jet<DiskValue> pf;                    // over g_c
};

DoubleDeformation double_deform(const FormalTheory& theory, int max_order);

// Disk pf at radius λR expressed through the data at R.
Jet<DiskValue> rescale_radius(const FormalTheory& theory, const Jet<DiskValue>& pf);
// Keeps only the terms proportional to log R (the anomaly-carrying part).
Jet<DiskValue> log_radius_part(const Jet<DiskValue>& pf);

struct BetaResult {
  std::vector<std::string> marginals;
  std::map<std::string, Jet<Rational>> beta;  // β^γ as a degree-2 jet in g_c
  std::map<std::string, Jet<SymExpr>> running;  // g_c^γ + log λ·β^γ
  std::map<std::tuple<std::string, std::string, std::string>, Rational> structure_constants;
};

BetaResult beta(const FormalTheory& theory);

// β^γ read off from the log λ coefficient of ∫⟨O_γ⟩ in rescale_radius(pf) − pf.
std::map<std::string, Jet<Rational>> beta_from_rescaling(const FormalTheory& theory, const Jet<DiskValue>& pf);

// The shift predicted by the beta function: log λ·β^γ ∫⟨O_γ⟩.
Jet<DiskValue> predicted_anomaly(const FormalTheory& theory, const BetaResult& b);

}  // namespace fqft
