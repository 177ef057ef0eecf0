#pragma once

#include "fqft/errors.hpp"
#include "fqft/partition.hpp"
#include "fqft/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

namespace fqft {

struct FockBasisState {
  Partition chiral;
  Partition antichiral;

  int level() const { return chiral.level() + antichiral.level(); }
  std::string label() const;

  friend bool operator==(const FockBasisState&, const FockBasisState&) = default;
  friend auto operator<=>(const FockBasisState&, const FockBasisState&) = default;
};

// Parses the labels produced by FockBasisState::label ("1", "j[2,1]", "jbar[1]", "j[1]jbar[1]").
FockBasisState parse_basis_label(const std::string& text);

class TruncatedFockSpace {
 public:
  explicit TruncatedFockSpace(int l_max);

  int l_max() const { return l_max_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<FockBasisState>& basis() const { return basis_; }
  const FockBasisState& state(std::size_t i) const { return basis_.at(i); }
  int level(std::size_t i) const { return basis_[i].level(); }
  std::optional<std::size_t> find(const FockBasisState& s) const;
  std::size_t index_of(const FockBasisState& s) const;

  friend bool operator==(const TruncatedFockSpace& a, const TruncatedFockSpace& b) {
    return a.l_max_ == b.l_max_;
  }

 private:
  int l_max_;
  std::vector<FockBasisState> basis_;
  std::map<FockBasisState, std::size_t> index_;
};

using SpacePtr = std::shared_ptr<const TruncatedFockSpace>;

inline constexpr int kDefaultHardCap = 14;

SpacePtr build_space(int l_max, int hard_cap = kDefaultHardCap);

inline void require_same_space(const SpacePtr& a, const SpacePtr& b) {
  if (!a || !b || !(*a == *b)) throw ContractViolation("space mismatch");
}

template <class S>
class BoundaryState {
 public:
  BoundaryState() = default;
  explicit BoundaryState(SpacePtr space) : space_(std::move(space)), coeffs_(space_->dim(), S(0)) {}

  static BoundaryState vacuum(SpacePtr space) { return basis(std::move(space), 0); }
  static BoundaryState basis(SpacePtr space, std::size_t i) {
    BoundaryState v(std::move(space));
    v.coeffs_.at(i) = S(1);
    return v;
  }
  static BoundaryState basis(SpacePtr space, const FockBasisState& s) {
    auto i = space->index_of(s);
    return basis(std::move(space), i);
  }

  const SpacePtr& space() const { return space_; }
  std::size_t dim() const { return coeffs_.size(); }
  const std::vector<S>& coeffs() const { return coeffs_; }
  S& operator[](std::size_t i) { return coeffs_[i]; }
  const S& operator[](std::size_t i) const { return coeffs_[i]; }

  BoundaryState& operator+=(const BoundaryState& o) {
    require_same_space(space_, o.space_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  BoundaryState& operator-=(const BoundaryState& o) {
    require_same_space(space_, o.space_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  BoundaryState& operator*=(const S& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  friend BoundaryState operator+(BoundaryState a, const BoundaryState& b) { return a += b; }
  friend BoundaryState operator-(BoundaryState a, const BoundaryState& b) { return a -= b; }
  friend BoundaryState operator*(const S& s, BoundaryState a) { return a *= s; }
  friend BoundaryState operator-(BoundaryState a) { return a *= S(-1); }

  friend bool operator==(const BoundaryState& a, const BoundaryState& b) {
    return a.space_ && b.space_ && *a.space_ == *b.space_ && a.coeffs_ == b.coeffs_;
  }

  double norm() const {
    double m = 0;
    for (const auto& c : coeffs_) m = std::max(m, magnitude(c));
    return m;
  }
  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (!fqft::is_zero(c)) return false;
    return true;
  }

  template <class T>
  BoundaryState<T> cast() const {
    BoundaryState<T> out(space_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] = convert<T>(coeffs_[i]);
    return out;
  }

 private:
  template <class T>
  static T convert(const S& s) {
    if constexpr (std::is_same_v<T, S>) return s;
    else return from_rational<T>(s);
  }

  SpacePtr space_;
  std::vector<S> coeffs_;
};

template <class S>
struct ModeAction {
  BoundaryState<S> state;
  std::size_t dropped = 0;  // input components whose image left the truncation
};

struct SparseEntry {
  std::size_t row;
  Rational value;
};

// Exact sparse matrix on a truncated space, stored by columns. A column is flagged when
// the untruncated image of that basis vector has components above l_max.
class SparseOperator {
 public:
  explicit SparseOperator(SpacePtr space);

  const SpacePtr& space() const { return space_; }
  std::size_t dim() const { return columns_.size(); }
  const std::vector<SparseEntry>& column(std::size_t c) const { return columns_[c]; }
  bool overflows(std::size_t c) const { return overflow_[c]; }

  void add(std::size_t row, std::size_t col, const Rational& value);
  void mark_overflow(std::size_t col) { overflow_[col] = true; }

  Rational entry(std::size_t row, std::size_t col) const;
  std::vector<std::tuple<std::size_t, std::size_t, Rational>> triplets() const;

  SparseOperator& operator+=(const SparseOperator& o);
  SparseOperator& operator*=(const Rational& s);
  friend SparseOperator operator+(SparseOperator a, const SparseOperator& b) { return a += b; }
  friend SparseOperator operator-(SparseOperator a, const SparseOperator& b) { return a += Rational(-1) * b; }
  friend SparseOperator operator*(const Rational& s, SparseOperator a) { return a *= s; }

  // Composition a∘b (b applied first).
  friend SparseOperator compose(const SparseOperator& a, const SparseOperator& b);

  bool same_entries(const SparseOperator& o) const;
  static SparseOperator identity(SpacePtr space);

  template <class S>
  ModeAction<S> apply(const BoundaryState<S>& v) const {
    require_same_space(space_, v.space());
    ModeAction<S> out{BoundaryState<S>(space_), 0};
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (fqft::is_zero(v[c])) continue;
      if (overflow_[c]) ++out.dropped;
      for (const auto& e : columns_[c]) out.state[e.row] += from_rational<S>(e.value) * v[c];
    }
    return out;
  }

 private:
  void prune(std::size_t col);

  SpacePtr space_;
  std::vector<std::vector<SparseEntry>> columns_;
  std::vector<bool> overflow_;
};

enum class ModeKind { j, jbar, L, Lbar };

std::string to_string(ModeKind kind);

struct ModeOperator {
  ModeKind kind;
  int n;
  bool shifted = false;
  SparseOperator matrix;

  const SpacePtr& space() const { return matrix.space(); }
  std::string name() const;
};

ModeOperator build_mode(const SpacePtr& space, ModeKind kind, int n);
ModeOperator build_virasoro(const SpacePtr& space, int n, bool shifted, ModeKind kind = ModeKind::L);

template <class S>
ModeAction<S> apply_mode(const ModeOperator& op, const BoundaryState<S>& v) {
  return op.matrix.apply(v);
}

// Gram matrix of the pairing ⟨0|j_{ν_k}…j_{ν_1} j_{-μ_1}…j_{-μ_m}|0⟩, evaluated with mode matrices.
class ShapovalovForm {
 public:
  explicit ShapovalovForm(SpacePtr space);

  const SpacePtr& space() const { return space_; }
  const Rational& gram(std::size_t i, std::size_t j) const;

  template <class S>
  S pair(const BoundaryState<S>& u, const BoundaryState<S>& v) const {
    require_same_space(space_, u.space());
    require_same_space(space_, v.space());
    S total(0);
    for (const auto& [ij, g] : entries_) total += u[ij.first] * from_rational<S>(g) * v[ij.second];
    return total;
  }

 private:
  SpacePtr space_;
  std::map<std::pair<std::size_t, std::size_t>, Rational> entries_;
};

template <class S>
S shapovalov(const BoundaryState<S>& u, const BoundaryState<S>& v) {
  require_same_space(u.space(), v.space());
  return ShapovalovForm(u.space()).pair(u, v);
}

}  // namespace fqft
