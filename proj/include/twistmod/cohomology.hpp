#pragma once

#include <optional>
#include <vector>

#include "twistmod/twisted.hpp"

namespace twistmod {

/// A finite complex of degree blocks with exact rational differentials.
/// `direction` is +1 for a cohomology grading (D_k: block k -> k+1) and -1
/// for a homology grading (D_k: block k -> k-1).  D o D = 0 is validated at
/// construction.
class ChainComplex {
 public:
  ChainComplex(const GradedOperator& d, int direction)
      : dim_(d.dim()), direction_(direction) {
    if (d.degree() != direction || (direction != 1 && direction != -1))
      throw DegreeError("chain complex needs a degree +-1 operator matching its direction");
    for (int p = 0; p <= dim_; ++p) {
      dims_.push_back(static_cast<int>(binomial(dim_, p)));
      diff_.push_back(d.block(p));
    }
    for (int p = 0; p <= dim_; ++p) {
      int q = p + direction_;
      if (q < 0 || q > dim_) continue;
      int r = q + direction_;
      if (r < 0 || r > dim_) continue;
      if (!mat_mul(diff_[q], diff_[p]).is_zero())
        throw DegreeError("differential does not square to zero");
    }
  }

  int dim() const { return dim_; }
  int direction() const { return direction_; }
  int block_dim(int k) const { return dims_[k]; }
  const MatQ& differential(int k) const { return diff_[k]; }

  /// dim ker - dim im in each degree, by exact rank computation.
  std::vector<int> betti_numbers() const {
    std::vector<int> b;
    for (int k = 0; k <= dim_; ++k) {
      int out_rank = rank_in_range(k);
      int in_rank = rank_in_range(k - direction_);
      b.push_back(dims_[k] - out_rank - in_rank);
    }
    return b;
  }

  /// For a cocycle v in block k, a preimage under the incoming differential,
  /// or nothing when the class is nontrivial.  Throws when v is not a
  /// cocycle or lives in the wrong block.
  std::optional<std::vector<Rational>> coboundary_preimage(int k,
                                                           const std::vector<Rational>& v) const {
    if (k < 0 || k > dim_ || static_cast<int>(v.size()) != dims_[k])
      throw DegreeError("element does not live in block " + std::to_string(k));
    int q = k + direction_;
    if (q >= 0 && q <= dim_) {
      const MatQ& out = diff_[k];
      for (int r = 0; r < out.rows; ++r) {
        Rational s(0);
        for (int c = 0; c < out.cols; ++c) s += out.at(r, c) * v[c];
        if (!is_zero(s)) throw DegreeError("element is not a cocycle");
      }
    }
    int src = k - direction_;
    if (src < 0 || src > dim_) {
      // no incoming differential: only the zero class is a coboundary
      for (const auto& x : v)
        if (!is_zero(x)) return std::nullopt;
      return std::vector<Rational>{};
    }
    return solve_exact(diff_[src], v);
  }

 private:
  int rank_in_range(int k) const {
    if (k < 0 || k > dim_) return 0;
    int q = k + direction_;
    if (q < 0 || q > dim_) return 0;
    return rank_exact(diff_[k]);
  }

  int dim_, direction_;
  std::vector<int> dims_;
  std::vector<MatQ> diff_;
};

inline std::vector<int> betti_numbers(const ChainComplex& c) { return c.betti_numbers(); }

inline std::vector<Rational> element_coordinates(const DegreeBasis& basis, const Multivector& v,
                                                 int degree) {
  std::vector<Rational> out(basis.monomials(degree).size(), Rational(0));
  for (const auto& [m, c] : v.terms()) {
    if (set_degree(m) != degree) throw DegreeError("element not homogeneous of expected degree");
    out[basis.rank(m)] = c;
  }
  return out;
}

/// The cohomology complex (multivectors, d_{pi,psi}) of a twisted structure.
inline ChainComplex cohomology_complex(const TwistedStructure& s) {
  return ChainComplex(s.derived().d_pi_psi, +1);
}

/// The homology complex (forms, the square-zero volume generator).  For the
/// unimodular structures this project ships the volume generator coincides
/// with the algebraic one; it is the chain-level realization of the duality
/// isomorphism.
inline ChainComplex homology_complex(const TwistedStructure& s) {
  return ChainComplex(s.derived().bv_lambda, -1);
}

/// True iff the modular section is a coboundary from degree 0.  Over a point
/// the degree-0 coboundaries vanish, so this amounts to Z = 0, but the test
/// is done generically through the complex.
inline bool is_unimodular(const TwistedStructure& s) {
  auto z = modular_section(s);  // validates the structure equation
  auto complex = cohomology_complex(s);
  DegreeBasis basis(s.dim());
  auto pre = complex.coboundary_preimage(1, element_coordinates(basis, z, 1));
  return pre.has_value();
}

struct DualityReport {
  std::vector<int> homology;    // betti numbers of (forms, volume generator)
  std::vector<int> cohomology;  // betti numbers of (multivectors, d_pi_psi)
  bool isomorphic = false;      // H_k == H^{N-k} componentwise
  bool conjugate = false;       // the two canonical generators coincide
};

/// The duality H_k ~ H^{N-k} for unimodular structures; refuses otherwise.
inline DualityReport duality_check(const TwistedStructure& s) {
  if (!is_unimodular(s))
    throw TwistedConditionError("duality_check requires an unimodular structure",
                                modular_section(s).str("e"));
  DualityReport r;
  r.homology = homology_complex(s).betti_numbers();
  r.cohomology = cohomology_complex(s).betti_numbers();
  r.isomorphic = true;
  const int n = s.dim();
  for (int k = 0; k <= n; ++k)
    if (r.homology[k] != r.cohomology[n - k]) r.isomorphic = false;
  const auto& d = s.derived();
  r.conjugate = (d.bv_lambda == d.bv);
  return r;
}

}  // namespace twistmod
