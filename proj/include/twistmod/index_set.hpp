#pragma once

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "twistmod/error.hpp"

namespace twistmod {

// A basis monomial e_{i1} ^ ... ^ e_{ip} (indices strictly increasing) is
// encoded as the bitmask with bits i1..ip set, 0-based.  The empty set is
// the unit of the algebra.
using Mask = std::uint32_t;

inline int set_degree(Mask m) { return std::popcount(m); }

inline Mask full_mask(int dim) { return (Mask{1} << dim) - 1; }

/// Dimension cap for dense operator blocks (2^N storage).  Override with
/// the TMTOOL_MAX_DIM environment variable.
inline int max_dimension() {
  static const int cap = [] {
    if (const char* s = std::getenv("TMTOOL_MAX_DIM")) {
      int v = std::atoi(s);
      if (v >= 1 && v <= 24) return v;
    }
    return 12;
  }();
  return cap;
}

inline void check_dimension(int dim) {
  if (dim < 1 || dim > max_dimension())
    throw DimensionMismatch("dimension " + std::to_string(dim) +
                            " outside [1, " + std::to_string(max_dimension()) + "]");
}

/// Sign of e_I ^ e_J as a reordering of e_{I u J}; 0 when I and J intersect.
inline int wedge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int inversions = 0;
  Mask bb = b;
  while (bb) {
    int j = std::countr_zero(bb);
    bb &= bb - 1;
    inversions += std::popcount(a >> (j + 1));
  }
  return (inversions & 1) ? -1 : 1;
}

/// Interior product of a monomial by a single basis vector:
/// i_{e_j} e_I = (-1)^{#(i in I : i < j)} e_{I \ j}, zero when j not in I.
inline int single_interior_sign(int j, Mask i) {
  if (!((i >> j) & 1)) return 0;
  return (std::popcount(i & ((Mask{1} << j) - 1)) & 1) ? -1 : 1;
}

/// i_{e_J} on e_I with the composition rule i_{X^Y} = i_X o i_Y: the factor
/// with the largest index acts first.  Returns the sign and writes I \ J;
/// zero when J is not contained in I.
inline int multi_interior_sign(Mask j, Mask i, Mask* rest) {
  if ((i & j) != j) return 0;
  int sign = 1;
  Mask cur = i;
  Mask jj = j;
  while (jj) {
    int hi = 31 - std::countl_zero(jj);
    jj &= ~(Mask{1} << hi);
    int s = single_interior_sign(hi, cur);
    sign *= s;
    cur &= ~(Mask{1} << hi);
  }
  *rest = cur;
  return sign;
}

inline std::vector<int> mask_indices(Mask m) {
  std::vector<int> out;
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

inline long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

/// Per-degree monomial table for a fixed dimension: the masks of degree p in
/// increasing numeric order, plus the inverse rank lookup.
class DegreeBasis {
 public:
  explicit DegreeBasis(int dim) : dim_(dim), by_degree_(dim + 1), rank_(Mask{1} << dim, 0) {
    for (Mask m = 0; m < (Mask{1} << dim); ++m) {
      int p = set_degree(m);
      rank_[m] = static_cast<int>(by_degree_[p].size());
      by_degree_[p].push_back(m);
    }
  }
  int dim() const { return dim_; }
  const std::vector<Mask>& monomials(int degree) const {
    if (degree < 0 || degree > dim_) {
      static const std::vector<Mask> none;
      return none;
    }
    return by_degree_[degree];
  }
  int rank(Mask m) const { return rank_[m]; }

 private:
  int dim_;
  std::vector<std::vector<Mask>> by_degree_;
  std::vector<int> rank_;
};

}  // namespace twistmod
