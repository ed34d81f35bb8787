#pragma once

#include <cstdint>
#include <random>

#include "twistmod/exterior.hpp"
#include "twistmod/lie_algebra.hpp"

namespace twistmod::testing {

// ---- fixture algebras -----------------------------------------------------

inline LieAlgebra sl2() {
  return LieAlgebra({"H", "Xp", "Xm"},
                    {{{0, 1}, {{1, rat(2)}}},
                     {{0, 2}, {{2, rat(-2)}}},
                     {{1, 2}, {{0, rat(1)}}}});
}

inline MatQ sl2_form() {
  MatQ g(3, 3);
  g.at(0, 0) = rat(2);
  g.at(1, 2) = rat(1);
  g.at(2, 1) = rat(1);
  return g;
}

/// Non-abelian 2-dimensional algebra, [e1, e2] = e1.
inline LieAlgebra nonabelian2() {
  return LieAlgebra({"e1", "e2"}, {{{0, 1}, {{0, rat(1)}}}});
}

inline LieAlgebra abelian(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("e" + std::to_string(i));
  return LieAlgebra(names, {});
}

/// Heisenberg + line: [e1, e2] = e3 in dimension 4.
inline LieAlgebra heisenberg4() {
  return LieAlgebra({"e1", "e2", "e3", "e4"}, {{{0, 1}, {{2, rat(1)}}}});
}

inline LieAlgebra so3() {
  return LieAlgebra({"e1", "e2", "e3"},
                    {{{0, 1}, {{2, rat(1)}}},
                     {{1, 2}, {{0, rat(1)}}},
                     {{0, 2}, {{1, rat(-1)}}}});
}

inline MatQ identity_form(int n) {
  MatQ g(n, n);
  for (int i = 0; i < n; ++i) g.at(i, i) = rat(1);
  return g;
}

/// sl2 + central line, dimension 4.
inline LieAlgebra sl2_center() {
  return LieAlgebra({"H", "Xp", "Xm", "c"},
                    {{{0, 1}, {{1, rat(2)}}},
                     {{0, 2}, {{2, rat(-2)}}},
                     {{1, 2}, {{0, rat(1)}}}});
}

/// aff(1) + aff(1): [e1, e2] = e1 and [e3, e4] = e3.
inline LieAlgebra aff1_aff1() {
  return LieAlgebra({"e1", "e2", "e3", "e4"},
                    {{{0, 1}, {{0, rat(1)}}}, {{2, 3}, {{2, rat(1)}}}});
}

/// The algebra of affine transformations of the plane, gl(2) + translations,
/// basis (e11, e12, e21, e22, u1, u2).
inline LieAlgebra affine2() {
  using M = std::map<int, Rational>;
  std::map<std::pair<int, int>, M> c;
  c[{0, 1}] = M{{1, rat(1)}};
  c[{0, 2}] = M{{2, rat(-1)}};
  c[{0, 4}] = M{{4, rat(1)}};
  c[{1, 2}] = M{{0, rat(1)}, {3, rat(-1)}};
  c[{1, 3}] = M{{1, rat(1)}};
  c[{1, 5}] = M{{4, rat(1)}};
  c[{2, 3}] = M{{2, rat(-1)}};
  c[{2, 4}] = M{{5, rat(1)}};
  c[{3, 5}] = M{{5, rat(1)}};
  return LieAlgebra({"e11", "e12", "e21", "e22", "u1", "u2"}, c);
}

// All randomized tests draw from a seeded engine so failures replay exactly.
inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Rational random_rational(std::mt19937_64& g) {
  long num = static_cast<long>(g() % 9) - 4;        // -4..4
  long den = 1 + static_cast<long>(g() % 3);        // 1..3
  return rat(num, den);
}

inline Rational random_nonzero_rational(std::mt19937_64& g) {
  Rational r = random_rational(g);
  while (is_zero(r)) r = random_rational(g);
  return r;
}

template <class Tag>
ExtElement<Tag> random_element(std::mt19937_64& g, int dim, int degree) {
  ExtElement<Tag> x(dim);
  DegreeBasis basis(dim);
  for (Mask m : basis.monomials(degree)) x.add_term(m, random_rational(g));
  return x;
}

inline Multivector random_multivector(std::mt19937_64& g, int dim, int degree) {
  return random_element<VectorKindTag>(g, dim, degree);
}
inline Form random_form(std::mt19937_64& g, int dim, int degree) {
  return random_element<FormKindTag>(g, dim, degree);
}

}  // namespace twistmod::testing
