#pragma once

#include "fqft/errors.hpp"
#include "fqft/rational.hpp"
#include "fqft/symexpr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace fqft {

struct JetSymbol {
  std::string name;
  std::string group;  // symbols sharing a group obey a joint nilpotency bound
};

// A monomial is the multiset of its symbol names, kept sorted.
using JetMonomial = std::vector<std::string>;

struct MonomialLess {
  bool operator()(const JetMonomial& a, const JetMonomial& b) const {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  }
};

class JetAlgebra {
 public:
  JetAlgebra(std::vector<JetSymbol> symbols, std::map<std::string, int> group_order, int order = 2);

  const std::vector<JetSymbol>& symbols() const { return symbols_; }
  int order() const { return order_; }
  bool has_symbol(const std::string& name) const;
  const std::string& group_of(const std::string& name) const;
  // Whether the monomial survives truncation.
  bool admissible(const JetMonomial& m) const;

  friend bool operator==(const JetAlgebra& a, const JetAlgebra& b) {
    return a.order_ == b.order_ && a.group_order_ == b.group_order_ && a.names_ == b.names_;
  }

 private:
  std::vector<JetSymbol> symbols_;
  std::map<std::string, std::string> names_;
  std::map<std::string, int> group_order_;
  int order_;
};

using AlgebraPtr = std::shared_ptr<const JetAlgebra>;

inline std::string g_symbol(const std::string& label) { return "g[" + label + "]"; }
inline std::string gt_symbol(const std::string& label) { return "gt[" + label + "]"; }
inline std::string gc_symbol(const std::string& label) { return "gc[" + label + "]"; }

// g^α and g̃^α, each family first-order nilpotent (g^α g^β = 0, g̃^α g̃^β = 0).
AlgebraPtr double_deformation_algebra(const std::vector<std::string>& labels);
// g^α only, first-order nilpotent.
AlgebraPtr first_order_algebra(const std::vector<std::string>& labels);
// g_c^α, second-order nilpotent.
AlgebraPtr combined_algebra(const std::vector<std::string>& labels);

template <class T>
struct CoefficientTraits {
  static bool zero(const T& t) { return is_zero(t); }
  static T scale(const T& t, const Rational& q) { return T(q) * t; }
  static bool equal(const T& a, const T& b, double) { return a == b; }
  static std::string format(const T& t) { return to_string(t); }
};

template <>
struct CoefficientTraits<double> {
  static bool zero(double t) { return t == 0.0; }
  static double scale(double t, const Rational& q) { return q.get_d() * t; }
  static bool equal(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)}); }
  static std::string format(double t) { return std::to_string(t); }
};

template <>
struct CoefficientTraits<SymExpr> {
  static bool zero(const SymExpr& t) { return t.is_zero(); }
  static SymExpr scale(const SymExpr& t, const Rational& q) { return SymExpr(q) * t; }
  static bool equal(const SymExpr& a, const SymExpr& b, double) { return a == b; }
  static std::string format(const SymExpr& t) { return t.to_string(); }
};

template <class T>
class Jet {
 public:
  using Traits = CoefficientTraits<T>;
  using Terms = std::map<JetMonomial, T, MonomialLess>;

  explicit Jet(AlgebraPtr algebra) : algebra_(std::move(algebra)) {}

  static Jet constant(AlgebraPtr algebra, T value) {
    Jet j(std::move(algebra));
    j.add({}, std::move(value));
    return j;
  }
  static Jet symbol(AlgebraPtr algebra, const std::string& name, T value) {
    if (!algebra->has_symbol(name)) throw ContractViolation("unknown coupling symbol " + name);
    Jet j(std::move(algebra));
    j.add({name}, std::move(value));
    return j;
  }

  const AlgebraPtr& algebra() const { return algebra_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  const T* find(JetMonomial m) const {
    std::sort(m.begin(), m.end());
    auto it = terms_.find(m);
    return it == terms_.end() ? nullptr : &it->second;
  }

  void add(JetMonomial m, T value) {
    std::sort(m.begin(), m.end());
    for (const auto& s : m)
      if (!algebra_->has_symbol(s)) throw ContractViolation("unknown coupling symbol " + s);
    if (!algebra_->admissible(m)) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      if (!Traits::zero(value)) terms_.emplace(std::move(m), std::move(value));
      return;
    }
    it->second = it->second + value;
    if (Traits::zero(it->second)) terms_.erase(it);
  }

  Jet& operator+=(const Jet& o) {
    require_same(o);
    for (const auto& [m, v] : o.terms_) add(m, v);
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    require_same(o);
    for (const auto& [m, v] : o.terms_) add(m, Traits::scale(v, Rational(-1)));
    return *this;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }

  Jet scaled(const Rational& q) const {
    Jet out(algebra_);
    for (const auto& [m, v] : terms_) out.add(m, Traits::scale(v, q));
    return out;
  }

  template <class F>
  auto map(F&& f) const -> Jet<std::decay_t<decltype(f(std::declval<const T&>()))>> {
    Jet<std::decay_t<decltype(f(std::declval<const T&>()))>> out(algebra_);
    for (const auto& [m, v] : terms_) out.add(m, f(v));
    return out;
  }

  bool approx_equal(const Jet& o, double tol) const {
    require_same(o);
    auto covers = [&](const Jet& x, const Jet& y) {
      for (const auto& [m, v] : x.terms_) {
        const T* w = y.find(m);
        if (!w) {
          if (!Traits::equal(v, Traits::scale(v, Rational(0)), tol)) return false;
        } else if (!Traits::equal(v, *w, tol)) {
          return false;
        }
      }
      return true;
    };
    return covers(*this, o) && covers(o, *this);
  }

  friend bool operator==(const Jet& a, const Jet& b) {
    return *a.algebra_ == *b.algebra_ && a.terms_.size() == b.terms_.size() && a.approx_equal(b, 0.0);
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, v] : terms_) {
      if (!out.empty()) out += " + ";
      out += "(" + Traits::format(v) + ")";
      for (const auto& s : m) out += "*" + s;
    }
    return out;
  }

  void require_same(const Jet& o) const {
    if (!(*algebra_ == *o.algebra_)) throw ContractViolation("jet algebra mismatch");
  }

 private:
  AlgebraPtr algebra_;
  Terms terms_;
};

inline JetMonomial merge(const JetMonomial& a, const JetMonomial& b) {
  JetMonomial m = a;
  m.insert(m.end(), b.begin(), b.end());
  std::sort(m.begin(), m.end());
  return m;
}

// Product with truncation; `mul` combines coefficients.
template <class A, class B, class F>
auto jet_product(const Jet<A>& a, const Jet<B>& b, F&& mul) {
  using T = std::decay_t<decltype(mul(std::declval<const A&>(), std::declval<const B&>()))>;
  if (!(*a.algebra() == *b.algebra())) throw ContractViolation("jet algebra mismatch");
  Jet<T> out(a.algebra());
  for (const auto& [ma, va] : a.terms())
    for (const auto& [mb, vb] : b.terms()) {
      JetMonomial m = merge(ma, mb);
      if (a.algebra()->admissible(m)) out.add(std::move(m), mul(va, vb));
    }
  return out;
}

template <class T>
Jet<T> jet_mul(const Jet<T>& a, const Jet<T>& b) {
  return jet_product(a, b, [](const T& x, const T& y) { return T(x * y); });
}

// ĝ^a g^b S_ab ↦ ½ g_c^a g_c^b S_ab and g^a + g̃^a ↦ g_c^a.
template <class T>
Jet<T> recombine(const Jet<T>& expr, const std::vector<std::string>& labels, double tolerance = 0.0) {
  using Traits = CoefficientTraits<T>;
  auto target = combined_algebra(labels);
  Jet<T> out(target);
  std::map<std::string, std::string> role;  // symbol → label
  std::map<std::string, bool> is_tilde;
  for (const auto& l : labels) {
    role[g_symbol(l)] = l;
    role[gt_symbol(l)] = l;
    is_tilde[g_symbol(l)] = false;
    is_tilde[gt_symbol(l)] = true;
  }
  std::map<std::string, std::pair<const T*, const T*>> linear;
  std::map<std::pair<std::string, std::string>, const T*> bilinear;  // (tilde label, plain label)
  for (const auto& [m, v] : expr.terms()) {
    for (const auto& s : m)
      if (!role.count(s)) throw RecombinationFailure("symbol " + s + " is not a first-order coupling");
    if (m.empty()) {
      out.add({}, v);
    } else if (m.size() == 1) {
      auto& slot = linear[role[m[0]]];
      (is_tilde[m[0]] ? slot.second : slot.first) = &v;
    } else if (m.size() == 2 && is_tilde[m[0]] != is_tilde[m[1]]) {
      const auto& tilde = is_tilde[m[0]] ? m[0] : m[1];
      const auto& plain = is_tilde[m[0]] ? m[1] : m[0];
      bilinear[{role[tilde], role[plain]}] = &v;
    } else {
      throw RecombinationFailure("monomial outside the double-deformation jet space");
    }
  }
  for (const auto& [label, pair] : linear) {
    if (!pair.first || !pair.second || !Traits::equal(*pair.first, *pair.second, tolerance))
      throw RecombinationFailure("linear coefficients of " + g_symbol(label) + " and " + gt_symbol(label) + " differ");
    out.add({gc_symbol(label)}, *pair.first);
  }
  for (const auto& [ab, v] : bilinear) {
    const auto& [a, b] = ab;
    auto mirror = bilinear.find({b, a});
    const bool symmetric = mirror != bilinear.end() ? Traits::equal(*v, *mirror->second, tolerance)
                                                    : Traits::equal(*v, Traits::scale(*v, Rational(0)), tolerance);
    if (!symmetric) throw RecombinationFailure("bilinear part is not symmetric in (" + a + ", " + b + ")");
    if (a == b) out.add({gc_symbol(a), gc_symbol(a)}, Traits::scale(*v, Rational(1, 2)));
    else if (a < b) out.add({gc_symbol(a), gc_symbol(b)}, *v);
  }
  return out;
}

// Inverse of recombine: g_c^a ↦ g^a + g̃^a.
template <class T>
Jet<T> expand(const Jet<T>& expr, const std::vector<std::string>& labels) {
  using Traits = CoefficientTraits<T>;
  auto target = double_deformation_algebra(labels);
  std::map<std::string, std::string> label_of;
  for (const auto& l : labels) label_of[gc_symbol(l)] = l;
  Jet<T> out(target);
  for (const auto& [m, v] : expr.terms()) {
    std::vector<std::vector<std::string>> choices{{}};
    for (const auto& s : m) {
      auto it = label_of.find(s);
      if (it == label_of.end()) throw ContractViolation("symbol " + s + " is not a combined coupling");
      std::vector<std::vector<std::string>> next;
      for (const auto& c : choices)
        for (const auto& sym : {g_symbol(it->second), gt_symbol(it->second)}) {
          auto e = c;
          e.push_back(sym);
          next.push_back(std::move(e));
        }
      choices = std::move(next);
    }
    for (auto& c : choices) out.add(c, Traits::scale(v, Rational(1)));
  }
  return out;
}

}  // namespace fqft
