#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twistmod/exterior.hpp"
#include "twistmod/linalg.hpp"

namespace twistmod {

/// A finite-dimensional real Lie algebra with named basis, viewed throughout
/// as a Lie algebroid over a point: the anchor is identically zero, so every
/// anchor term of the general calculus drops out below.
class LieAlgebra {
 public:
  /// `constants` maps (i, j) with i < j to the expansion of [e_i, e_j];
  /// antisymmetry is built in by the i < j storage.  Jacobi is validated
  /// unless `validate` is false (useful for testing the validator itself).
  LieAlgebra(std::vector<std::string> names,
             std::map<std::pair<int, int>, std::map<int, Rational>> constants,
             std::optional<MatQ> bilinear_form = std::nullopt, bool validate = true)
      : dim_(static_cast<int>(names.size())),
        names_(std::move(names)),
        form_(std::move(bilinear_form)) {
    check_dimension(dim_);
    brackets_.assign(static_cast<size_t>(dim_) * dim_, Multivector(dim_));
    for (const auto& [ij, terms] : constants) {
      auto [i, j] = ij;
      if (i < 0 || j >= dim_ || i >= j)
        throw InputError("structure constants must be keyed by 0 <= i < j < dim");
      Multivector v(dim_);
      for (const auto& [k, c] : terms) {
        if (k < 0 || k >= dim_) throw InputError("structure constant target out of range");
        v.add_term(Mask{1} << k, c);
      }
      brackets_[static_cast<size_t>(i) * dim_ + j] = v;
      brackets_[static_cast<size_t>(j) * dim_ + i] = -v;
    }
    if (validate && !jacobi_holds())
      throw InputError("structure constants violate the Jacobi identity");
    if (form_) validate_form();
  }

  int dim() const { return dim_; }
  const std::vector<std::string>& names() const { return names_; }
  bool has_form() const { return form_.has_value(); }
  const MatQ& bilinear_form() const {
    if (!form_) throw InputError("no bilinear form on this algebra");
    return *form_;
  }

  /// [e_i, e_j] as a degree-1 multivector.
  const Multivector& bracket_basis(int i, int j) const {
    return brackets_[static_cast<size_t>(i) * dim_ + j];
  }

  /// Bracket of two degree-1 elements.
  Multivector bracket(const Multivector& x, const Multivector& y) const {
    if (!(x.is_zero() || x.degree() == 1) || !(y.is_zero() || y.degree() == 1))
      throw DegreeError("bracket takes degree-1 arguments");
    Multivector r(dim_);
    for (const auto& [mx, cx] : x.terms())
      for (const auto& [my, cy] : y.terms()) {
        int i = mask_indices(mx)[0], j = mask_indices(my)[0];
        if (i == j) continue;
        r = r + bracket_basis(i, j) * Rational(cx * cy);
      }
    return r;
  }

  bool jacobi_holds() const {
    for (int i = 0; i < dim_; ++i)
      for (int j = i + 1; j < dim_; ++j)
        for (int k = j + 1; k < dim_; ++k) {
          auto ei = Multivector::monomial(dim_, Mask{1} << i);
          auto ej = Multivector::monomial(dim_, Mask{1} << j);
          auto ek = Multivector::monomial(dim_, Mask{1} << k);
          auto cyc = bracket(bracket_basis(i, j), ek) + bracket(bracket_basis(j, k), ei) +
                     bracket(bracket_basis(k, i), ej);
          if (!cyc.is_zero()) return false;
        }
    return true;
  }

  Rational pair_form(int i, int j) const { return bilinear_form().at(i, j); }

 private:
  void validate_form() {
    const MatQ& g = *form_;
    if (g.rows != dim_ || g.cols != dim_) throw InputError("bilinear form has wrong shape");
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        if (g.at(i, j) != g.at(j, i)) throw InputError("bilinear form is not symmetric");
    if (rank_exact(g) != dim_) throw InputError("bilinear form is degenerate");
    // ad-invariance: <[x,y],z> + <y,[x,z]> = 0 over basis triples
    for (int x = 0; x < dim_; ++x)
      for (int y = 0; y < dim_; ++y)
        for (int z = 0; z < dim_; ++z) {
          Rational s(0);
          for (const auto& [m, c] : bracket_basis(x, y).terms())
            s += c * g.at(mask_indices(m)[0], z);
          for (const auto& [m, c] : bracket_basis(x, z).terms())
            s += c * g.at(y, mask_indices(m)[0]);
          if (!is_zero(s)) throw InputError("bilinear form is not ad-invariant");
        }
  }

  int dim_;
  std::vector<std::string> names_;
  std::vector<Multivector> brackets_;
  std::optional<MatQ> form_;
};

inline bool check_jacobi(const LieAlgebra& g) { return g.jacobi_holds(); }

inline Rational bracket_basis_coeff(const LieAlgebra& g, int i, int j, int k) {
  return g.bracket_basis(i, j).coeff(Mask{1} << k);
}

/// d eps^k = -sum_{i<j} c^k_{ij} eps^i ^ eps^j, extended as a degree +1
/// derivation.  Over a point only the bracket sum of the general formula
/// survives.  The convention witness: for sl2, d X-* = 2 H* ^ X-*.
inline Form ce_differential(const LieAlgebra& g, const Form& w) {
  if (w.dim() != g.dim()) throw DimensionMismatch("ce_differential: mixed dimensions");
  const int n = g.dim();
  Form r(n);
  for (const auto& [m, c] : w.terms()) {
    auto idx = mask_indices(m);
    for (size_t t = 0; t < idx.size(); ++t) {
      // d(eps^{i_t}) ^ eps^{I minus i_t}, with the (-1)^{t} from pulling the
      // factor to the front absorbed because d(eps) has even degree.
      Form d1(n);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          Rational ck = bracket_basis_coeff(g, i, j, idx[t]);
          if (!is_zero(ck)) d1.add_term((Mask{1} << i) | (Mask{1} << j), -ck);
        }
      if (d1.is_zero()) continue;
      int sgn = (t % 2) ? -1 : 1;
      Form rest = Form::monomial(n, m & ~(Mask{1} << idx[t]));
      r = r + wedge(d1, rest) * rat(sgn) * c;
    }
  }
  return r;
}

/// The Gerstenhaber (algebraic Schouten) bracket on multivectors:
/// [a_1^..^a_q, b_1^..^b_r] = sum (-1)^{k+l} [a_k,b_l] ^ rest, and any
/// bracket against a 0-vector vanishes over a point.
inline Multivector schouten(const LieAlgebra& g, const Multivector& a, const Multivector& b) {
  if (a.dim() != g.dim() || b.dim() != g.dim())
    throw DimensionMismatch("schouten: mixed dimensions");
  const int n = g.dim();
  Multivector r(n);
  for (const auto& [ma, ca] : a.terms()) {
    if (ma == 0) continue;
    auto ia = mask_indices(ma);
    for (const auto& [mb, cb] : b.terms()) {
      if (mb == 0) continue;
      auto ib = mask_indices(mb);
      for (size_t k = 0; k < ia.size(); ++k)
        for (size_t l = 0; l < ib.size(); ++l) {
          const Multivector& br = g.bracket_basis(ia[k], ib[l]);
          if (br.is_zero()) continue;
          int sgn = ((k + 1 + l + 1) % 2) ? -1 : 1;
          auto rest = wedge(Multivector::monomial(n, ma & ~(Mask{1} << ia[k])),
                            Multivector::monomial(n, mb & ~(Mask{1} << ib[l])));
          r = r + wedge(br, rest) * Rational(ca * cb * sgn);
        }
    }
  }
  return r;
}

/// L_X = [i_X, d] = i_X d + d i_X on forms.
inline Form lie_derivative(const LieAlgebra& g, const Multivector& x, const Form& w) {
  if (!x.is_zero() && x.degree() != 1) throw DegreeError("lie_derivative: X must be a vector");
  return interior(x, ce_differential(g, w)) + ce_differential(g, interior(x, w));
}

/// The 1-form x -> Tr(ad_x), a 1-cocycle; the infinitesimal modular
/// character of the algebra.
inline Form infinitesimal_character(const LieAlgebra& g) {
  const int n = g.dim();
  Form chi(n);
  for (int k = 0; k < n; ++k) {
    Rational tr(0);
    for (int m = 0; m < n; ++m) tr += bracket_basis_coeff(g, k, m, m);
    chi.add_term(Mask{1} << k, tr);
  }
  return chi;
}

}  // namespace twistmod
