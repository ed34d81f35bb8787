#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "twistmod/poly_geometry.hpp"

using namespace twistmod;

namespace {

PolyMultivector pmv(int n, std::initializer_list<int> idx, Poly c) {
  Mask m = 0;
  for (int i : idx) m |= Mask{1} << (i - 1);
  return PolyMultivector::monomial(n, m, std::move(c));
}
PolyForm pfm(int n, std::initializer_list<int> idx, Poly c) {
  Mask m = 0;
  for (int i : idx) m |= Mask{1} << (i - 1);
  return PolyForm::monomial(n, m, std::move(c));
}
Poly x(int i) { return Poly::var(i - 1); }
Poly c(long v) { return Poly(v); }

Poly random_poly(std::mt19937_64& g, int n, int deg) {
  Poly p;
  for (const auto& e : monomials_up_to(n, deg)) {
    long num = static_cast<long>(g() % 5) - 2;
    if (num) p.add_term(e, rat(num));
  }
  return p;
}

PolyMultivector random_poly_bivector(std::mt19937_64& g, int n, int deg) {
  PolyMultivector v(n);
  DegreeBasis basis(n);
  for (Mask m : basis.monomials(2)) v.add_term(m, random_poly(g, n, deg));
  return v;
}

/// pi = d1^d2 + d3^d4 + x1 d1^d3 style symplectic data: the inverse of a
/// closed unit-Pfaffian 2-form.
PolyMultivector inverse_bivector(const PolyForm& omega) {
  const int n = omega.dim();
  auto wm = poly_pi_matrix(PolyMultivector(n));  // zero matrix of the right shape
  for (const auto& [mask, cc] : omega.terms()) {
    auto idx = mask_indices(mask);
    wm[idx[0]][idx[1]] = cc;
    wm[idx[1]][idx[0]] = -cc;
  }
  Poly det = poly_det(wm);
  REQUIRE(det.is_constant());
  REQUIRE_FALSE(det.is_zero());
  Rational dc = det.constant_value();
  PolyMultivector pi(n);
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      std::vector<std::vector<Poly>> minor;
      for (int r = 0; r < n; ++r) {
        if (r == l) continue;
        std::vector<Poly> row;
        for (int col = 0; col < n; ++col)
          if (col != k) row.push_back(wm[r][col]);
        minor.push_back(std::move(row));
      }
      Poly mj = poly_det(minor);
      Poly entry = ((k + l) % 2 ? -mj : mj) / dc;  // (W^{-1})^{kl}
      pi.add_term((Mask{1} << k) | (Mask{1} << l), entry);
    }
  // check P W = Id on sharp: sharp(pi, i_X omega) = X for the frame fields
  for (int k = 0; k < n; ++k) {
    PolyMultivector ek(n);
    ek.add_term(Mask{1} << k, Poly(1));
    REQUIRE(sharp(pi, interior(ek, omega)) == ek);
  }
  return pi;
}

}  // namespace

TEST_CASE("polynomial arithmetic") {
  auto p = x(1) * x(1) + x(2) * c(3);
  REQUIRE(p.derivative(0) == x(1) * c(2));
  REQUIRE(p.derivative(1) == c(3));
  REQUIRE(p.derivative(2).is_zero());
  REQUIRE((p - p).is_zero());
  REQUIRE(p.total_degree() == 2);
  REQUIRE_FALSE(p.is_constant());
  REQUIRE(Poly(rat(5, 2)).constant_value() == rat(5, 2));
}

TEST_CASE("de Rham differential") {
  const int n = 3;
  REQUIRE(de_rham(pfm(n, {2}, x(1))) == pfm(n, {1, 2}, c(1)));
  REQUIRE(de_rham(pfm(n, {2}, c(1))).is_zero());
  // d о d = 0 on random 1- and 2-forms with polynomial coefficients
  std::mt19937_64 g(71);
  DegreeBasis basis(n);
  for (int t = 0; t < 8; ++t)
    for (int deg : {1, 2}) {
      PolyForm w(n);
      for (Mask m : basis.monomials(deg)) w.add_term(m, random_poly(g, n, 3));
      REQUIRE(de_rham(de_rham(w)).is_zero());
    }
  // Leibniz
  for (int t = 0; t < 6; ++t) {
    PolyForm a(n), b(n);
    for (Mask m : basis.monomials(1)) a.add_term(m, random_poly(g, n, 2));
    for (Mask m : basis.monomials(1)) b.add_term(m, random_poly(g, n, 2));
    REQUIRE(de_rham(wedge(a, b)) == wedge(de_rham(a), b) - wedge(a, de_rham(b)));
  }
}

TEST_CASE("Schouten bracket of fields") {
  const int n = 2;
  // [d1, x1 d2] = d2
  REQUIRE(schouten_fields(pmv(n, {1}, c(1)), pmv(n, {2}, x(1))) == pmv(n, {2}, c(1)));
  // constant symplectic bivector is Poisson
  auto pi0 = pmv(n, {1, 2}, c(1));
  REQUIRE(schouten_fields(pi0, pi0).is_zero());
  // the linear bivector -x2 d1^d2 is Poisson
  auto pir = pmv(n, {1, 2}, -x(2));
  REQUIRE(schouten_fields(pir, pir).is_zero());

  // graded laws on random data (R^3)
  std::mt19937_64 g(72);
  const int m = 3;
  DegreeBasis basis(m);
  for (int t = 0; t < 5; ++t) {
    auto rnd = [&](int deg) {
      PolyMultivector v(m);
      for (Mask mm : basis.monomials(deg)) v.add_term(mm, random_poly(g, m, 2));
      return v;
    };
    int da = 1 + static_cast<int>(g() % 2), db = 1 + static_cast<int>(g() % 2), dc = 1;
    auto a = rnd(da), b = rnd(db), cc = rnd(dc);
    int s = ((da - 1) * (db - 1)) % 2 ? 1 : -1;
    REQUIRE(schouten_fields(a, b) == schouten_fields(b, a) * Poly(s));
    int sbd = ((da - 1) * db) % 2 ? -1 : 1;
    REQUIRE(schouten_fields(a, wedge(b, cc)) ==
            wedge(schouten_fields(a, b), cc) + wedge(b, schouten_fields(a, cc)) * Poly(sbd));
    int sj = ((da - 1) * (db - 1)) % 2 ? -1 : 1;
    REQUIRE(schouten_fields(a, schouten_fields(b, cc)) ==
            schouten_fields(schouten_fields(a, b), cc) +
                schouten_fields(b, schouten_fields(a, cc)) * Poly(sj));
  }
}

TEST_CASE("hamiltonian fields") {
  const int n = 2;
  auto pi0 = pmv(n, {1, 2}, c(1));
  REQUIRE(hamiltonian(pi0, x(1)) == pmv(n, {2}, c(1)));
  REQUIRE(hamiltonian(pi0, c(7)).is_zero());
  // the linear Poisson structure: H_{x1} = -x2 d2
  auto pir = pmv(n, {1, 2}, -x(2));
  REQUIRE(hamiltonian(pir, x(1)) == pmv(n, {2}, -x(2)));
  // {x1, x2} = pi(dx1, dx2)
  REQUIRE(poisson_bracket(pi0, x(1), x(2)) == c(1));
}

TEST_CASE("jacobi anomaly") {
  const int n = 3;
  // psi = 0 Poisson: both sides vanish
  auto pi0 = pmv(n, {1, 2}, c(1));
  auto a0 = jacobi_anomaly(pi0, PolyForm(n), x(1) * x(2), x(3), x(1));
  REQUIRE(a0.lhs.is_zero());
  REQUIRE(a0.rhs.is_zero());

  // twisted instance on R^3: pi = x1 d1^d2 + d2^d3, psi = dx123
  auto pi = pmv(n, {1, 2}, x(1)) + pmv(n, {2, 3}, c(1));
  auto psi = pfm(n, {1, 2, 3}, c(1));
  auto rep = verify_twisted_poly(pi, psi);
  REQUIRE(rep.closed);
  REQUIRE(rep.condition);
  std::mt19937_64 g(73);
  for (int t = 0; t < 6; ++t) {
    auto f = random_poly(g, n, 2);
    auto h = random_poly(g, n, 2);
    auto k = random_poly(g, n, 2);
    auto an = jacobi_anomaly(pi, psi, f, h, k);
    REQUIRE(an.equal());
    // H_{f,g} = [H_f, H_g] + psi1(H_f, H_g)
    auto lhs = hamiltonian(pi, poisson_bracket(pi, f, h));
    auto rhs = schouten_fields(hamiltonian(pi, f), hamiltonian(pi, h)) +
               psi1_eval_vectors(pi, psi, hamiltonian(pi, f), hamiltonian(pi, h));
    REQUIRE(lhs == rhs);
  }

  // non-Poisson pi with any background produces an inequality witness
  auto bad_pi = pmv(n, {1, 2}, x(2)) + pmv(n, {2, 3}, x(1));
  REQUIRE_FALSE(schouten_fields(bad_pi, bad_pi).is_zero());
  bool witness = false;
  for (const auto& [f, h, k] :
       {std::array<Poly, 3>{x(1), x(2), x(3)},
        std::array<Poly, 3>{x(1) * x(2), x(3), x(1)},
        std::array<Poly, 3>{x(2) * x(3), x(1), x(2)}}) {
    if (!jacobi_anomaly(bad_pi, psi, f, h, k).equal()) witness = true;
  }
  REQUIRE(witness);
}

TEST_CASE("modular vector fields") {
  // symplectic R^2: unimodular
  auto pi0 = pmv(2, {1, 2}, c(1));
  auto lam2 = pfm(2, {1, 2}, c(1));
  REQUIRE(modular_vector_field(pi0, PolyForm(2), lam2).is_zero());

  // linear Poisson: X = divergence field = -d1
  auto pir = pmv(2, {1, 2}, -x(2));
  auto z = modular_vector_field(pir, PolyForm(2), lam2);
  REQUIRE(z == pmv(2, {1}, c(-1)));
  // L_{H_f} lambda = (X . f) lambda for test polynomials
  std::mt19937_64 g(74);
  for (int t = 0; t < 6; ++t) {
    auto f = random_poly(g, 2, 3);
    auto hf = hamiltonian(pir, f);
    // L_V lambda = d(i_V lambda) for the constant volume
    auto lie = de_rham(interior(hf, lam2));
    REQUIRE(lie == lam2 * vf_apply(z, f));
  }

  // twisted R^3 instance: Z is a cocycle of d_{pi,psi}
  auto pi = pmv(3, {1, 2}, x(1)) + pmv(3, {2, 3}, c(1));
  auto psi = pfm(3, {1, 2, 3}, c(1));
  auto lam3 = pfm(3, {1, 2, 3}, c(1));
  auto z3 = modular_vector_field(pi, psi, lam3);
  REQUIRE(z3 == pmv(3, {2}, c(-1)));
  REQUIRE(y_field(pi, psi).is_zero());  // rank <= 2 kills Y on R^3
  REQUIRE(d_pi_psi_poly(pi, psi, z3).is_zero());
  // d_{pi,psi} squares to zero on functions and fields here
  for (int t = 0; t < 4; ++t) {
    auto f = random_poly(g, 3, 2);
    auto once = d_pi_psi_poly(pi, psi, PolyMultivector::scalar(3, f));
    REQUIRE(d_pi_psi_poly(pi, psi, once).is_zero());
  }

  // volume must be constant
  REQUIRE_THROWS_AS(modular_vector_field(pi0, PolyForm(2), pfm(2, {1, 2}, x(1))), DegreeError);
}

TEST_CASE("maximal rank, non-constant: unimodular symplectic R^4") {
  const int n = 4;
  // omega = dx12 + dx34 + x1 dx13: closed, unit Pfaffian
  auto omega = pfm(n, {1, 2}, c(1)) + pfm(n, {3, 4}, c(1)) + pfm(n, {1, 3}, x(1));
  REQUIRE(de_rham(omega).is_zero());
  auto pi = inverse_bivector(omega);
  // non-constant and Poisson
  bool nonconstant = false;
  for (const auto& [m, cc] : pi.terms())
    if (!cc.is_constant()) nonconstant = true;
  REQUIRE(nonconstant);
  REQUIRE(schouten_fields(pi, pi).is_zero());
  // lambda = omega^2 has constant coefficient
  auto lam = wedge(omega, omega);
  REQUIRE(lam.coeff(full_mask(n)).is_constant());
  // d omega = psi = 0 here, and the modular field vanishes
  auto z = modular_vector_field(pi, PolyForm(n), lam);
  REQUIRE(z.is_zero());
}

TEST_CASE("twisted nondegenerate R^4: facts on record") {
  // omega = dx12 + dx34 + x1 dx23 has unit Pfaffian but is not closed; the
  // structure equation forces psi = -d omega, and the divergence and
  // background fields coincide, so X - Y = 0 while X + Y does not vanish.
  const int n = 4;
  auto omega = pfm(n, {1, 2}, c(1)) + pfm(n, {3, 4}, c(1)) + pfm(n, {2, 3}, x(1));
  REQUIRE_FALSE(de_rham(omega).is_zero());
  auto pi = inverse_bivector(omega);
  auto dom = de_rham(omega);
  PolyForm psi(n);
  bool found = false;
  for (int sgn : {1, -1}) {
    PolyForm cand = dom * Poly(sgn);
    if (verify_twisted_poly(pi, cand).ok()) {
      psi = cand;
      found = true;
      break;
    }
  }
  REQUIRE(found);
  REQUIRE(psi == dom * Poly(-1));
  auto lam = wedge(omega, omega);
  auto xf = x_field(pi, lam);
  auto yf = y_field(pi, psi);
  REQUIRE_FALSE(xf.is_zero());
  REQUIRE(xf == yf);
  REQUIRE(d_pi_psi_poly(pi, psi, xf - yf).is_zero());
  // the anomaly identity holds on the genuinely twisted instance
  auto an = jacobi_anomaly(pi, psi, x(1) * x(2), x(3), x(4) + x(1));
  REQUIRE(an.equal());
}

TEST_CASE("not globally hamiltonian") {
  auto pir = pmv(2, {1, 2}, -x(2));
  REQUIRE(not_globally_hamiltonian(pir, pmv(2, {1}, c(-1)), 6));
  // a constructed coboundary is found again
  auto u = x(1) * x(2);
  auto img = schouten_fields(pir, PolyMultivector::scalar(2, u));
  REQUIRE_FALSE(not_globally_hamiltonian(pir, img, 3));
  REQUIRE_FALSE(not_globally_hamiltonian(pir, PolyMultivector(2), 2));
}

TEST_CASE("gauge transformations") {
  const int n = 2;
  auto pi0 = pmv(n, {1, 2}, c(1));
  // B = 0: identity
  auto g0 = gauge_transform(pi0, PolyForm(n), PolyForm(n));
  REQUIRE(g0.pi_prime == pi0);
  REQUIRE(g0.psi_prime.is_zero());
  REQUIRE(g0.det == rat(1));

  // constant B on the constant symplectic structure
  auto b = pfm(n, {1, 2}, c(2));
  auto g1 = gauge_transform(pi0, PolyForm(n), b);
  REQUIRE(g1.det == rat(1));  // (1 - 2)^2
  REQUIRE(verify_twisted_poly(g1.pi_prime, g1.psi_prime).ok());
  // pi' is constant
  for (const auto& [m, cc] : g1.pi_prime.terms()) REQUIRE(cc.is_constant());

  // non-constant determinant is rejected
  REQUIRE_THROWS_AS(gauge_transform(pi0, PolyForm(n), pfm(n, {1, 2}, x(1))), InputError);

  // twisted R^3 instance with a compatible constant gauge field
  auto pi = pmv(3, {1, 2}, x(1)) + pmv(3, {2, 3}, c(1));
  auto psi = pfm(3, {1, 2, 3}, c(1));
  auto b3 = pfm(3, {1, 3}, c(3));
  auto g2 = gauge_transform(pi, psi, b3);
  REQUIRE(verify_twisted_poly(g2.pi_prime, g2.psi_prime).ok());
  REQUIRE(g2.psi_prime == psi);  // constant B is closed

  // a linear bivector with a constant gauge field has non-unit polynomial
  // determinant and is rejected as well
  auto pir = pmv(2, {1, 2}, -x(2));
  REQUIRE_THROWS_AS(gauge_transform(pir, PolyForm(2), pfm(2, {1, 2}, c(1))), InputError);
}

TEST_CASE("gauge modular correspondence") {
  // B = 0: Z' = Z on the nose
  auto pi = pmv(3, {1, 2}, x(1)) + pmv(3, {2, 3}, c(1));
  auto psi = pfm(3, {1, 2, 3}, c(1));
  auto lam = pfm(3, {1, 2, 3}, c(1));
  auto r0 = gauge_modular_correspondence(pi, psi, PolyForm(3), lam, 4);
  REQUIRE(r0.z_prime == r0.z);
  REQUIRE(r0.coboundary_found);

  // constant-coefficient instance: equality on the nose
  auto pi0 = pmv(2, {1, 2}, c(1));
  auto r1 = gauge_modular_correspondence(pi0, PolyForm(2), pfm(2, {1, 2}, c(2)),
                                         pfm(2, {1, 2}, c(1)), 4);
  REQUIRE(r1.coboundary_found);
  REQUIRE(r1.z_prime == r1.target);

  // twisted R^3 instance with constant B: coboundary at low degree
  auto r2 = gauge_modular_correspondence(pi, psi, pfm(3, {1, 3}, c(3)), lam, 6);
  REQUIRE(r2.coboundary_found);
}

TEST_CASE("factor two against the characteristic construction") {
  // symplectic R^2
  auto r0 = elw_factor_two(pmv(2, {1, 2}, c(1)), PolyForm(2), pfm(2, {1, 2}, c(1)));
  REQUIRE(r0.u.is_zero());
  REQUIRE(r0.equal);

  // linear Poisson on R^2: U = 2X
  auto r1 = elw_factor_two(pmv(2, {1, 2}, -x(2)), PolyForm(2), pfm(2, {1, 2}, c(1)));
  REQUIRE(r1.z == pmv(2, {1}, c(-1)));
  REQUIRE(r1.u == pmv(2, {1}, c(-2)));
  REQUIRE(r1.equal);

  // twisted R^3 instance
  auto pi = pmv(3, {1, 2}, x(1)) + pmv(3, {2, 3}, c(1));
  auto psi = pfm(3, {1, 2, 3}, c(1));
  auto r2 = elw_factor_two(pi, psi, pfm(3, {1, 2, 3}, c(1)));
  REQUIRE(r2.equal);
}
