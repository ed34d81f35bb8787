#pragma once

#include <functional>
#include <vector>

#include "twistmod/exterior.hpp"
#include "twistmod/linalg.hpp"

namespace twistmod {

/// A degree-homogeneous linear operator on a full exterior algebra, stored
/// densely per degree block.  The same representation serves operators on
/// multivectors and on forms; callers track which algebra they mean.
class GradedOperator {
 public:
  GradedOperator(int dim, int op_degree)
      : dim_(dim), deg_(op_degree), basis_(dim), blocks_(dim + 1) {
    check_dimension(dim);
    for (int p = 0; p <= dim; ++p) {
      int q = p + deg_;
      if (q < 0 || q > dim) continue;
      blocks_[p] = MatQ(static_cast<int>(basis_.monomials(q).size()),
                        static_cast<int>(basis_.monomials(p).size()));
    }
  }

  /// Builds the operator from its action on basis monomials.  `f` receives a
  /// monomial mask and returns any exterior element; components outside the
  /// target degree block are rejected.
  template <class F>
  static GradedOperator from_action(int dim, int op_degree, F&& f) {
    GradedOperator u(dim, op_degree);
    for (int p = 0; p <= dim; ++p) {
      int q = p + op_degree;
      if (q < 0 || q > dim) continue;
      const auto& mons = u.basis_.monomials(p);
      for (int col = 0; col < static_cast<int>(mons.size()); ++col) {
        auto img = f(mons[col]);
        for (const auto& [m, c] : img.terms()) {
          if (set_degree(m) != q)
            throw DegreeError("operator action is not degree-homogeneous");
          u.blocks_[p].at(u.basis_.rank(m), col) = c;
        }
      }
    }
    return u;
  }

  int dim() const { return dim_; }
  int degree() const { return deg_; }

  /// Image of one basis monomial, straight out of the matrix column.
  std::map<Mask, Rational> apply_monomial(Mask m) const {
    std::map<Mask, Rational> out;
    int p = set_degree(m);
    int q = p + deg_;
    if (q < 0 || q > dim_) return out;
    const MatQ& b = blocks_[p];
    int col = basis_.rank(m);
    const auto& targets = basis_.monomials(q);
    for (int row = 0; row < b.rows; ++row) {
      const Rational& c = b.at(row, col);
      if (!twistmod::is_zero(c)) out.emplace(targets[row], c);
    }
    return out;
  }

  template <class Tag>
  ExtElement<Tag> apply(const ExtElement<Tag>& x) const {
    if (x.dim() != dim_) throw DimensionMismatch("operator applied across dimensions");
    ExtElement<Tag> r(dim_);
    for (const auto& [m, c] : x.terms())
      for (const auto& [tm, tc] : apply_monomial(m)) r.add_term(tm, Rational(tc * c));
    return r;
  }

  /// this o inner (apply `inner` first).
  GradedOperator compose(const GradedOperator& inner) const {
    require_same_dim(inner);
    GradedOperator r(dim_, deg_ + inner.deg_);
    for (int p = 0; p <= dim_; ++p) {
      int mid = p + inner.deg_;
      int q = mid + deg_;
      if (mid < 0 || mid > dim_ || q < 0 || q > dim_) continue;
      r.blocks_[p] = mat_mul(blocks_[mid], inner.blocks_[p]);
    }
    return r;
  }

  GradedOperator operator+(const GradedOperator& o) const { return combined(o, Rational(1)); }
  GradedOperator operator-(const GradedOperator& o) const { return combined(o, Rational(-1)); }
  GradedOperator operator*(const Rational& s) const {
    GradedOperator r = *this;
    for (auto& b : r.blocks_)
      for (auto& x : b.a) x *= s;
    return r;
  }
  friend GradedOperator operator*(const Rational& s, const GradedOperator& u) { return u * s; }

  bool is_zero() const {
    for (const auto& b : blocks_)
      if (!b.is_zero()) return false;
    return true;
  }
  bool operator==(const GradedOperator& o) const {
    return dim_ == o.dim_ && deg_ == o.deg_ && blocks_ == o.blocks_;
  }

  const MatQ& block(int input_degree) const { return blocks_[input_degree]; }
  const DegreeBasis& basis() const { return basis_; }

  void require_same_dim(const GradedOperator& o) const {
    if (dim_ != o.dim_) throw DimensionMismatch("operators over different dimensions");
  }

 private:
  GradedOperator combined(const GradedOperator& o, const Rational& s) const {
    require_same_dim(o);
    if (deg_ != o.deg_) throw DegreeError("sum of operators of unequal degree");
    GradedOperator r = *this;
    for (int p = 0; p <= dim_; ++p) {
      if (r.blocks_[p].a.empty()) {
        r.blocks_[p] = o.blocks_[p];
        for (auto& x : r.blocks_[p].a) x *= s;
      } else if (!o.blocks_[p].a.empty()) {
        for (size_t i = 0; i < r.blocks_[p].a.size(); ++i)
          r.blocks_[p].a[i] += s * o.blocks_[p].a[i];
      }
    }
    return r;
  }

  int dim_, deg_;
  DegreeBasis basis_;
  std::vector<MatQ> blocks_;
};

/// [u,v] = u o v - (-1)^{|u||v|} v o u.
inline GradedOperator graded_commutator(const GradedOperator& u, const GradedOperator& v) {
  int s = (u.degree() * v.degree()) % 2 ? -1 : 1;
  return u.compose(v) - v.compose(u) * rat(s);
}

/// Left multiplication l_a by a homogeneous element.
template <class Tag>
GradedOperator left_multiplication(const ExtElement<Tag>& a) {
  if (!a.is_homogeneous()) throw DegreeError("left multiplication needs homogeneous element");
  return GradedOperator::from_action(a.dim(), a.degree(0), [&](Mask m) {
    return wedge(a, ExtElement<Tag>::monomial(a.dim(), m));
  });
}

namespace detail {
// Kind-free wedge of operator images (maps keyed by monomial mask).
inline std::map<Mask, Rational> wedge_maps(const std::map<Mask, Rational>& a,
                                           const std::map<Mask, Rational>& b) {
  std::map<Mask, Rational> r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      int s = wedge_sign(ma, mb);
      if (!s) continue;
      auto [it, inserted] = r.emplace(ma | mb, Rational(ca * cb * s));
      if (!inserted) {
        it->second += ca * cb * s;
        if (is_zero(it->second)) r.erase(it);
      }
    }
  return r;
}

inline void add_into(std::map<Mask, Rational>& acc, const std::map<Mask, Rational>& m, int sign) {
  for (const auto& [k, v] : m) {
    auto [it, inserted] = acc.emplace(k, Rational(v * sign));
    if (!inserted) {
      it->second += v * sign;
      if (is_zero(it->second)) acc.erase(it);
    }
  }
}
}  // namespace detail

/// Phi^1_u(a) = u(a) - u(1) a, as an operator.
inline GradedOperator phi1(const GradedOperator& u) {
  auto u1 = u.apply_monomial(0);
  return GradedOperator::from_action(u.dim(), u.degree(), [&](Mask m) {
    struct Wrap {
      std::map<Mask, Rational> t;
      const std::map<Mask, Rational>& terms() const { return t; }
    } out;
    out.t = u.apply_monomial(m);
    auto shift = detail::wedge_maps(u1, {{m, Rational(1)}});
    detail::add_into(out.t, shift, -1);
    return out;
  });
}

/// Phi^2_u(a)(b) = Phi^1_u(ab) - Phi^1_u(a) b - (-1)^{|a||u|} a Phi^1_u(b),
/// returned as the operator b -> Phi^2_u(a)(b) for homogeneous a.
inline GradedOperator phi2_at(const GradedOperator& u, const GradedOperator& p1, Mask a_mask) {
  int da = set_degree(a_mask);
  int sa = (da * u.degree()) % 2 ? -1 : 1;
  std::map<Mask, Rational> a_map{{a_mask, Rational(1)}};
  auto p1a = p1.apply_monomial(a_mask);
  return GradedOperator::from_action(u.dim(), u.degree() + da, [&](Mask b) {
    struct Wrap {
      std::map<Mask, Rational> t;
      const std::map<Mask, Rational>& terms() const { return t; }
    } out;
    std::map<Mask, Rational> b_map{{b, Rational(1)}};
    auto ab = detail::wedge_maps(a_map, b_map);
    for (const auto& [m, c] : ab) {
      auto img = p1.apply_monomial(m);
      for (const auto& [k, v] : img) detail::add_into(out.t, {{k, Rational(v * c)}}, 1);
    }
    detail::add_into(out.t, detail::wedge_maps(p1a, b_map), -1);
    detail::add_into(out.t, detail::wedge_maps(a_map, p1.apply_monomial(b)), -sa);
    return out;
  });
}

inline GradedOperator phi2(const GradedOperator& u, Mask a_mask) {
  return phi2_at(u, phi1(u), a_mask);
}

/// Phi^3_u(a,b) as the operator c -> Phi^2_u(a)(bc) - Phi^2_u(a)(b) c
/// - (-1)^{(|a|+|u|)|b|} b Phi^2_u(a)(c).
inline GradedOperator phi3(const GradedOperator& u, Mask a_mask, Mask b_mask) {
  auto p2a = phi2(u, a_mask);
  int da = set_degree(a_mask), db = set_degree(b_mask);
  int s = ((da + u.degree()) * db) % 2 ? -1 : 1;
  std::map<Mask, Rational> b_map{{b_mask, Rational(1)}};
  auto p2ab = p2a.apply_monomial(b_mask);
  return GradedOperator::from_action(u.dim(), u.degree() + da + db, [&](Mask c) {
    struct Wrap {
      std::map<Mask, Rational> t;
      const std::map<Mask, Rational>& terms() const { return t; }
    } out;
    std::map<Mask, Rational> c_map{{c, Rational(1)}};
    for (const auto& [m, co] : detail::wedge_maps(b_map, c_map)) {
      for (const auto& [k, v] : p2a.apply_monomial(m))
        detail::add_into(out.t, {{k, Rational(v * co)}}, 1);
    }
    detail::add_into(out.t, detail::wedge_maps(p2ab, c_map), -1);
    detail::add_into(out.t, detail::wedge_maps(b_map, p2a.apply_monomial(c)), -s);
    return out;
  });
}

/// True iff v satisfies the graded Leibniz rule on all monomial pairs.
inline bool is_leibniz(const GradedOperator& v) {
  const int dim = v.dim();
  for (Mask a = 0; a < (Mask{1} << dim); ++a) {
    std::map<Mask, Rational> a_map{{a, Rational(1)}};
    auto va = v.apply_monomial(a);
    int s = (v.degree() * set_degree(a)) % 2 ? -1 : 1;
    for (Mask b = 0; b < (Mask{1} << dim); ++b) {
      std::map<Mask, Rational> b_map{{b, Rational(1)}};
      std::map<Mask, Rational> acc;
      for (const auto& [m, c] : detail::wedge_maps(a_map, b_map))
        for (const auto& [k, vv] : v.apply_monomial(m))
          detail::add_into(acc, {{k, Rational(vv * c)}}, 1);
      detail::add_into(acc, detail::wedge_maps(va, b_map), -1);
      detail::add_into(acc, detail::wedge_maps(a_map, v.apply_monomial(b)), -s);
      if (!acc.empty()) return false;
    }
  }
  return true;
}

/// Differential-operator order via the Phi filtration: 0, 1, 2, or 3 meaning
/// "order > 2".  Order <= 2 is decided by "Phi^2_u(a) is a derivation for
/// every a", which is the pairwise form of Phi^3_u = 0.
inline int operator_order(const GradedOperator& u) {
  auto p1 = phi1(u);
  if (p1.is_zero()) return 0;
  const int dim = u.dim();
  bool order1 = true;
  std::vector<GradedOperator> p2;
  p2.reserve(size_t{1} << dim);
  for (Mask a = 0; a < (Mask{1} << dim); ++a) {
    p2.push_back(phi2_at(u, p1, a));
    if (!p2.back().is_zero()) order1 = false;
  }
  if (order1) return 1;
  for (const auto& op : p2)
    if (!is_leibniz(op)) return 3;
  return 2;
}

/// A differential operator of order <= 1 with u(1) = 0.
inline bool is_derivation(const GradedOperator& u) {
  if (!u.apply_monomial(0).empty()) return false;
  auto p1 = phi1(u);
  if (p1.is_zero()) return true;  // order 0 with u(1)=0 means u = 0
  for (Mask a = 0; a < (Mask{1} << u.dim()); ++a)
    if (!phi2_at(u, p1, a).is_zero()) return false;
  return true;
}

inline bool squares_to_zero(const GradedOperator& u) { return u.compose(u).is_zero(); }

/// Checks the generator law
///   bracket(a,b) = (-1)^{|a|} (u(ab) - u(a) b - (-1)^{|a|} a u(b))
/// over all pairs of basis monomials; bilinearity extends the check.
/// `bracket` maps a pair of monomial masks to a term map.
template <class BracketFn>
bool generates_bracket(const GradedOperator& u, BracketFn&& bracket) {
  if (u.degree() != -1) throw DegreeError("a generator must have degree -1");
  const int dim = u.dim();
  for (Mask a = 0; a < (Mask{1} << dim); ++a) {
    std::map<Mask, Rational> a_map{{a, Rational(1)}};
    auto ua = u.apply_monomial(a);
    int sa = set_degree(a) % 2 ? -1 : 1;
    for (Mask b = 0; b < (Mask{1} << dim); ++b) {
      std::map<Mask, Rational> b_map{{b, Rational(1)}};
      std::map<Mask, Rational> acc;
      for (const auto& [m, c] : detail::wedge_maps(a_map, b_map))
        for (const auto& [k, v] : u.apply_monomial(m))
          detail::add_into(acc, {{k, Rational(v * c)}}, 1);
      detail::add_into(acc, detail::wedge_maps(ua, b_map), -1);
      detail::add_into(acc, detail::wedge_maps(a_map, u.apply_monomial(b)), -sa);
      // acc now holds u(ab) - u(a)b - (-1)^{|a|} a u(b)
      std::map<Mask, Rational> expect = bracket(a, b);
      detail::add_into(expect, acc, -sa);
      if (!expect.empty()) return false;
    }
  }
  return true;
}

}  // namespace twistmod
