#include "fqft/fock.hpp"

#include <algorithm>
#include <functional>
#include <regex>

namespace fqft {

std::string FockBasisState::label() const {
  if (chiral.empty() && antichiral.empty()) return "1";
  std::string out;
  if (!chiral.empty()) out += "j" + chiral.to_string();
  if (!antichiral.empty()) out += "jbar" + antichiral.to_string();
  return out;
}

FockBasisState parse_basis_label(const std::string& text) {
  if (text == "1") return {};
  static const std::regex pattern(R"(^(?:j(\[[0-9,]*\]))?(?:jbar(\[[0-9,]*\]))?$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern) || text.empty())
    throw ValidationError("malformed basis label: " + text);
  FockBasisState s;
  if (m[1].matched) s.chiral = parse_partition(m[1].str());
  if (m[2].matched) s.antichiral = parse_partition(m[2].str());
  return s;
}

TruncatedFockSpace::TruncatedFockSpace(int l_max) : l_max_(l_max) {
  if (l_max < 0) throw ContractViolation("l_max must be non-negative");
  std::vector<std::vector<Partition>> by_level;
  for (int k = 0; k <= l_max; ++k) by_level.push_back(partitions_of(k));
  for (int total = 0; total <= l_max; ++total) {
    std::vector<FockBasisState> level_states;
    for (int k = 0; k <= total; ++k)
      for (const auto& c : by_level[k])
        for (const auto& a : by_level[total - k]) level_states.push_back({c, a});
    std::sort(level_states.begin(), level_states.end(), [](const auto& x, const auto& y) {
      if (x.chiral != y.chiral) return x.chiral > y.chiral;
      return x.antichiral > y.antichiral;
    });
    basis_.insert(basis_.end(), level_states.begin(), level_states.end());
  }
  for (std::size_t i = 0; i < basis_.size(); ++i) index_.emplace(basis_[i], i);
}

std::optional<std::size_t> TruncatedFockSpace::find(const FockBasisState& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t TruncatedFockSpace::index_of(const FockBasisState& s) const {
  auto i = find(s);
  if (!i) throw ContractViolation("basis state " + s.label() + " not in truncated space");
  return *i;
}

SpacePtr build_space(int l_max, int hard_cap) {
  if (l_max < 0) throw ContractViolation("l_max must be non-negative");
  if (l_max > hard_cap)
    throw ResourceError("l_max=" + std::to_string(l_max) + " exceeds hard cap " + std::to_string(hard_cap));
  return std::make_shared<const TruncatedFockSpace>(l_max);
}

SparseOperator::SparseOperator(SpacePtr space)
    : space_(std::move(space)), columns_(space_->dim()), overflow_(space_->dim(), false) {}

void SparseOperator::add(std::size_t row, std::size_t col, const Rational& value) {
  if (is_zero(value)) return;
  auto& column = columns_.at(col);
  auto it = std::lower_bound(column.begin(), column.end(), row,
                             [](const SparseEntry& e, std::size_t r) { return e.row < r; });
  if (it != column.end() && it->row == row) {
    it->value += value;
    if (is_zero(it->value)) column.erase(it);
  } else {
    column.insert(it, SparseEntry{row, value});
  }
}

Rational SparseOperator::entry(std::size_t row, std::size_t col) const {
  for (const auto& e : columns_.at(col))
    if (e.row == row) return e.value;
  return 0;
}

std::vector<std::tuple<std::size_t, std::size_t, Rational>> SparseOperator::triplets() const {
  std::vector<std::tuple<std::size_t, std::size_t, Rational>> out;
  for (std::size_t c = 0; c < columns_.size(); ++c)
    for (const auto& e : columns_[c]) out.emplace_back(e.row, c, e.value);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  return out;
}

SparseOperator& SparseOperator::operator+=(const SparseOperator& o) {
  require_same_space(space_, o.space_);
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    for (const auto& e : o.columns_[c]) add(e.row, c, e.value);
    overflow_[c] = overflow_[c] || o.overflow_[c];
  }
  return *this;
}

SparseOperator& SparseOperator::operator*=(const Rational& s) {
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    for (auto& e : columns_[c]) e.value *= s;
    prune(c);
  }
  return *this;
}

void SparseOperator::prune(std::size_t col) {
  auto& column = columns_[col];
  column.erase(std::remove_if(column.begin(), column.end(), [](const SparseEntry& e) { return is_zero(e.value); }),
               column.end());
}

SparseOperator compose(const SparseOperator& a, const SparseOperator& b) {
  require_same_space(a.space_, b.space_);
  SparseOperator out(a.space_);
  for (std::size_t c = 0; c < b.columns_.size(); ++c) {
    bool overflow = b.overflow_[c];
    for (const auto& mid : b.columns_[c]) {
      overflow = overflow || a.overflow_[mid.row];
      for (const auto& e : a.columns_[mid.row]) out.add(e.row, c, e.value * mid.value);
    }
    out.overflow_[c] = overflow;
  }
  return out;
}

bool SparseOperator::same_entries(const SparseOperator& o) const {
  if (!(*space_ == *o.space_)) return false;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const auto& x = columns_[c];
    const auto& y = o.columns_[c];
    if (x.size() != y.size()) return false;
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x[k].row != y[k].row || x[k].value != y[k].value) return false;
  }
  return true;
}

SparseOperator SparseOperator::identity(SpacePtr space) {
  SparseOperator out(space);
  for (std::size_t i = 0; i < space->dim(); ++i) out.add(i, i, 1);
  return out;
}

std::string to_string(ModeKind kind) {
  switch (kind) {
    case ModeKind::j: return "j";
    case ModeKind::jbar: return "jbar";
    case ModeKind::L: return "L";
    case ModeKind::Lbar: return "Lbar";
  }
  return "?";
}

std::string ModeOperator::name() const {
  return to_string(kind) + "_" + std::to_string(n) + (shifted && n == 0 ? "_shifted" : "");
}

ModeOperator build_mode(const SpacePtr& space, ModeKind kind, int n) {
  if (kind != ModeKind::j && kind != ModeKind::jbar) throw ContractViolation("build_mode expects a current mode");
  const bool chiral = kind == ModeKind::j;
  SparseOperator m(space);
  if (n != 0) {
    for (std::size_t c = 0; c < space->dim(); ++c) {
      const FockBasisState& s = space->state(c);
      const Partition& side = chiral ? s.chiral : s.antichiral;
      FockBasisState image = s;
      Partition& target = chiral ? image.chiral : image.antichiral;
      if (n < 0) {
        if (s.level() - n > space->l_max()) {
          m.mark_overflow(c);
          continue;
        }
        target = side.with_part(-n);
        m.add(space->index_of(image), c, 1);
      } else {
        int mult = side.multiplicity(n);
        if (mult == 0) continue;
        target = side.without_part(n);
        m.add(space->index_of(image), c, Rational(n * mult));
      }
    }
  }
  return ModeOperator{kind, n, false, std::move(m)};
}

ModeOperator build_virasoro(const SpacePtr& space, int n, bool shifted, ModeKind kind) {
  if (kind != ModeKind::L && kind != ModeKind::Lbar) throw ContractViolation("build_virasoro expects L or Lbar");
  const ModeKind current = kind == ModeKind::L ? ModeKind::j : ModeKind::jbar;
  const int cutoff = space->l_max() + std::abs(n);
  std::map<int, SparseOperator> modes;
  auto mode = [&](int m) -> const SparseOperator& {
    auto it = modes.find(m);
    if (it == modes.end()) it = modes.emplace(m, build_mode(space, current, m).matrix).first;
    return it->second;
  };
  SparseOperator total(space);
  const Rational half(1, 2);
  for (int k = -cutoff; k <= cutoff; ++k) {
    int left = -k;
    int right = k + n;
    if (left == 0 || right == 0) continue;
    if (left > right) std::swap(left, right);
    if (right > space->l_max() && right > 0) continue;  // annihilates every truncated state
    total += half * compose(mode(left), mode(right));
  }
  if (shifted && n == 0) total += Rational(-1, 24) * SparseOperator::identity(space);
  return ModeOperator{kind, n, shifted, std::move(total)};
}

ShapovalovForm::ShapovalovForm(SpacePtr space) : space_(std::move(space)) {
  std::map<int, SparseOperator> chiral, antichiral;
  auto annihilator = [&](std::map<int, SparseOperator>& cache, ModeKind k, int m) -> const SparseOperator& {
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, build_mode(space_, k, m).matrix).first;
    return it->second;
  };
  for (std::size_t i = 0; i < space_->dim(); ++i) {
    const FockBasisState& bra = space_->state(i);
    for (std::size_t j = 0; j < space_->dim(); ++j) {
      const FockBasisState& ket = space_->state(j);
      if (ket.level() != bra.level()) continue;
      BoundaryState<Rational> v = BoundaryState<Rational>::basis(space_, j);
      for (int part : bra.chiral.parts()) v = annihilator(chiral, ModeKind::j, part).apply(v).state;
      for (int part : bra.antichiral.parts()) v = annihilator(antichiral, ModeKind::jbar, part).apply(v).state;
      if (!is_zero(v[0])) entries_.emplace(std::make_pair(i, j), v[0]);
    }
  }
}

const Rational& ShapovalovForm::gram(std::size_t i, std::size_t j) const {
  static const Rational zero(0);
  auto it = entries_.find({i, j});
  return it == entries_.end() ? zero : it->second;
}

}  // namespace fqft
