#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>

#include "twistmod/twisted.hpp"

namespace twistmod {

// Randomized verification of the operator identities of the calculus.  Every
// check is exact; a trial either proves a counterexample or passes.  All
// randomness flows from one seeded engine so runs replay bit-for-bit.

inline Rational random_rational(std::mt19937_64& g) {
  long num = static_cast<long>(g() % 9) - 4;
  long den = 1 + static_cast<long>(g() % 3);
  return rat(num, den);
}

inline Multivector random_bivector(std::mt19937_64& g, int dim) {
  Multivector pi(dim);
  DegreeBasis basis(dim);
  for (Mask m : basis.monomials(2)) pi.add_term(m, random_rational(g));
  return pi;
}

inline Form random_three_form(std::mt19937_64& g, int dim) {
  Form psi(dim);
  DegreeBasis basis(dim);
  for (Mask m : basis.monomials(3)) psi.add_term(m, random_rational(g));
  return psi;
}

/// The 2-form inverting pi, i.e. with i_X omega = (pi-sharp)^{-1} X; empty
/// when pi is degenerate.
inline std::optional<Form> inverse_form(const Multivector& pi) {
  const int n = pi.dim();
  MatQ p = pi_matrix(pi);
  MatQ aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = p.at(i, j);
    aug.at(i, n + i) = rat(1);
  }
  int row = 0;
  for (int col = 0; col < n && row < n; ++col) {
    int piv = -1;
    for (int r = row; r < n; ++r)
      if (!is_zero(aug.at(r, col))) { piv = r; break; }
    if (piv < 0) return std::nullopt;
    for (int c = 0; c < 2 * n; ++c) std::swap(aug.at(row, c), aug.at(piv, c));
    Rational inv = 1 / aug.at(row, col);
    for (int c = 0; c < 2 * n; ++c) aug.at(row, c) *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == row || is_zero(aug.at(r, col))) continue;
      Rational f = aug.at(r, col);
      for (int c = 0; c < 2 * n; ++c) aug.at(r, c) -= f * aug.at(row, c);
    }
    ++row;
  }
  if (row < n) return std::nullopt;
  Form omega(n);
  for (int k = 0; k < n; ++k)
    for (int j = k + 1; j < n; ++j)
      if (!is_zero(aug.at(k, n + j)))
        omega.add_term((Mask{1} << k) | (Mask{1} << j), aug.at(k, n + j));
  return omega;
}

/// A twisted structure with invertible pi: psi is the unique closed 3-form
/// (+- d omega) satisfying the structure equation, when one exists.
inline std::optional<TwistedStructure> twisted_from_invertible(const LieAlgebra& g,
                                                               const Multivector& pi,
                                                               const Form& lambda) {
  auto omega = inverse_form(pi);
  if (!omega) return std::nullopt;
  Form dom = ce_differential(g, *omega);
  for (int sgn : {1, -1}) {
    TwistedStructure s(g, pi, dom * rat(sgn), lambda);
    if (verify_twisted(s).ok()) return s;
  }
  return std::nullopt;
}

/// del_underline lambda = 2 i_Y lambda (the trace identity for Y, oriented
/// as our composition rules force; arbitrary pi, psi).
inline bool check_prop_y(const TwistedStructure& s) {
  const auto& d = s.derived();
  return d.del_underline.apply(s.lambda()) == star(s.lambda(), d.y) * rat(2);
}

/// del_pi lambda = -i_X lambda (arbitrary pi, psi).
inline bool check_star_x(const TwistedStructure& s) {
  const auto& d = s.derived();
  return d.del_pi.apply(s.lambda()) == -star(s.lambda(), d.x);
}

/// Graded skew-symmetry of Phi^2_u in its two arguments, for the named
/// operators of the structure.
inline bool check_skew(const GradedOperator& u) {
  const int dim = u.dim();
  auto p1 = phi1(u);
  for (Mask a = 0; a < (Mask{1} << dim); ++a) {
    auto p2a = phi2_at(u, p1, a);
    for (Mask b = 0; b <= a; ++b) {
      auto p2b = phi2_at(u, p1, b);
      int da = set_degree(a), db = set_degree(b);
      auto lhs = p2b.apply_monomial(a);
      auto rhs = p2a.apply_monomial(b);
      int sl = db % 2 ? -1 : 1;
      int sr = -((((da + 1) * (db + 1)) + da) % 2 ? -1 : 1);
      // sl * Phi2_u(b)(a) == sr * Phi2_u(a)(b)
      std::map<Mask, Rational> diff;
      for (const auto& [m, c] : lhs) diff[m] = c * sl;
      for (const auto& [m, c] : rhs) {
        diff[m] -= c * sr;
        if (is_zero(diff[m])) diff.erase(m);
      }
      if (!diff.empty()) return false;
    }
  }
  return true;
}

/// d_{pi,psi} o ^q pi# = - ^{q+1} pi# o d_A for q = 1..N-1 (needs the
/// structure equation).
inline bool check_chain(const TwistedStructure& s) {
  const int n = s.dim();
  const auto& d = s.derived();
  DegreeBasis basis(n);
  for (int q = 1; q < n; ++q)
    for (Mask m : basis.monomials(q)) {
      Form w = Form::monomial(n, m);
      if (!(d.d_pi_psi.apply(sharp_power(s.pi(), w)) ==
            -sharp_power(s.pi(), ce_differential(s.algebra(), w))))
        return false;
    }
  return true;
}

/// The square of the plain generator on a product of 1-forms, valid for
/// arbitrary (pi, psi):
///   (del_pi + del_underline)^2 (a^b) = -i_pi d(i_{pi#a ^ pi#b} psi)
///                                      - (1/2) <[pi,pi], d(a^b)>.
inline bool check_generator_square(const TwistedStructure& s) {
  const int n = s.dim();
  const auto& d = s.derived();
  auto sq = d.bv_plain.compose(d.bv_plain);
  Multivector br = schouten(s.algebra(), s.pi(), s.pi());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Form a = Form::monomial(n, Mask{1} << i), b = Form::monomial(n, Mask{1} << j);
      Rational lhs = sq.apply(wedge(a, b)).coeff(0);
      Form h = interior(wedge(sharp(s.pi(), a), sharp(s.pi(), b)), s.psi());
      Rational t1 = -d.i_pi.apply(ce_differential(s.algebra(), h)).coeff(0);
      Rational t2 = pairing(ce_differential(s.algebra(), wedge(a, b)), br) / 2;
      if (!(lhs == t1 - t2)) return false;
    }
  return true;
}

/// The coboundary law for a twisted structure: on every pair of basis
/// covectors,
///   <a^b, d_{pi,psi} Y> = -i_pi d(i_{pi#a ^ pi#b} psi) - (1/2)<[pi,pi], d(a^b)>;
/// the bracket term enters with the sign our orientation forces.
inline bool check_coboundary(const TwistedStructure& s) {
  const int n = s.dim();
  const auto& d = s.derived();
  Multivector dY = d.d_pi_psi.apply(d.y);
  Multivector br = schouten(s.algebra(), s.pi(), s.pi());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Form a = Form::monomial(n, Mask{1} << i), b = Form::monomial(n, Mask{1} << j);
      Rational lhs = pairing(wedge(a, b), dY);
      Form h = interior(wedge(sharp(s.pi(), a), sharp(s.pi(), b)), s.psi());
      Rational t1 = -d.i_pi.apply(ce_differential(s.algebra(), h)).coeff(0);
      Rational t2 = pairing(ce_differential(s.algebra(), wedge(a, b)), br) / 2;
      if (!(lhs == t1 - t2)) return false;
    }
  return true;
}

struct IdentitySuiteResult {
  std::map<std::string, bool> results;
  std::string counterexample;  // first failing item with minimized data
  bool all() const {
    for (const auto& [k, v] : results)
      if (!v) return false;
    return true;
  }
};

namespace detail {
/// Greedy term deletion: shrink (pi, psi) while `fails` stays true.
template <class FailsFn>
void minimize_counterexample(const LieAlgebra& g, Multivector& pi, Form& psi, const Form& lam,
                             FailsFn&& fails) {
  bool shrunk = true;
  while (shrunk) {
    shrunk = false;
    for (const auto& [m, c] : std::map<Mask, Rational>(pi.terms())) {
      Multivector cand = pi;
      cand.add_term(m, -c);
      if (fails(TwistedStructure(g, cand, psi, lam))) {
        pi = cand;
        shrunk = true;
      }
    }
    for (const auto& [m, c] : std::map<Mask, Rational>(psi.terms())) {
      Form cand = psi;
      cand.add_term(m, -c);
      if (fails(TwistedStructure(g, pi, cand, lam))) {
        psi = cand;
        shrunk = true;
      }
    }
  }
}
}  // namespace detail

/// Runs the full randomized identity suite over one algebra: `trials` draws
/// of arbitrary (pi, psi) for the unconditional identities, plus twisted
/// instances (built from invertible bivectors when the dimension is even)
/// for the conditional ones.
inline IdentitySuiteResult identity_suite(const LieAlgebra& g, unsigned long seed, int trials) {
  std::mt19937_64 rng(seed);
  const int n = g.dim();
  IdentitySuiteResult out;
  auto note = [&](const std::string& key, bool ok, const TwistedStructure* s) {
    auto [it, inserted] = out.results.emplace(key, ok);
    if (!inserted) it->second = it->second && ok;
    if (!ok && out.counterexample.empty() && s) {
      Multivector pi = s->pi();
      Form psi = s->psi();
      if (key == "eq_self") {
        detail::minimize_counterexample(g, pi, psi, s->lambda(), [](const TwistedStructure& t) {
          return !check_self_identity(t);
        });
      } else if (key == "prop_y") {
        detail::minimize_counterexample(g, pi, psi, s->lambda(), [](const TwistedStructure& t) {
          return !check_prop_y(t);
        });
      }
      out.counterexample = key + ": pi = " + pi.str("e") + "; psi = " + psi.str("eps");
    }
  };

  Form lam = Form::monomial(n, full_mask(n));
  for (int t = 0; t < trials; ++t) {
    Multivector pi = random_bivector(rng, n);
    Form psi = random_three_form(rng, n);
    TwistedStructure s(g, pi, psi, lam * rat(1 + static_cast<long>(rng() % 3)));
    note("eq_self", check_self_identity(s), &s);
    note("prop_y", check_prop_y(s), &s);
    note("star_x", check_star_x(s), &s);
    note("star_z", star_relations(s).star_z, &s);
    note("star_z2", star_relations(s).star_z2, &s);
    note("generator_square", check_generator_square(s), &s);
    const auto& d = s.derived();
    note("skew_del_pi", check_skew(d.del_pi), &s);
    note("skew_del_underline", check_skew(d.del_underline), &s);
    note("skew_i_pi", check_skew(d.i_pi), &s);

    if (n % 2 == 0) {
      auto tw = twisted_from_invertible(g, pi, lam);
      if (tw) {
        note("chain", check_chain(*tw), &*tw);
        note("coboundary", check_coboundary(*tw), &*tw);
        const auto& dt = tw->derived();
        note("d_pi_psi_squares_to_zero", squares_to_zero(dt.d_pi_psi), &*tw);
        note("bv_lambda_squares_to_zero", squares_to_zero(dt.bv_lambda), &*tw);
        note("square_zero_generator", squares_to_zero(dt.bv_plain - dt.i_y), &*tw);
        note("difference_is_x_minus_2y",
             (dt.bv_lambda - dt.bv_plain) ==
                 GradedOperator::from_action(n, -1,
                                             [&](Mask m) {
                                               return interior(dt.x - dt.y * rat(2),
                                                               Form::monomial(n, m));
                                             }),
             &*tw);
        note("x_minus_y_is_cocycle", dt.d_pi_psi.apply(dt.x - dt.y).is_zero(), &*tw);
      }
    }
  }
  return out;
}

}  // namespace twistmod
