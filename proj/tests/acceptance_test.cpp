// Acceptance suite: every criterion is checked in exact arithmetic and
// prints one PASS/FAIL line.  The binary exits nonzero if any criterion
// fails.  Structure files come from data/.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "twistmod/cohomology.hpp"
#include "twistmod/identities.hpp"
#include "twistmod/json_io.hpp"
#include "twistmod/poly_geometry.hpp"
#include "twistmod/reports.hpp"

using namespace twistmod;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& what, const std::function<bool()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string error;
  try {
    ok = body();
  } catch (const std::exception& e) {
    error = e.what();
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  std::printf("[%s] criterion %2d: %s (%lld ms)%s%s\n", ok ? "PASS" : "FAIL", number,
              what.c_str(), static_cast<long long>(ms), error.empty() ? "" : " error: ",
              error.c_str());
  if (!ok) ++g_failures;
}

TwistedStructure load(const std::string& name) {
  return parse_lie_structure(load_json_file(std::string(TWISTMOD_DATA) + "/" + name)).structure;
}

PolyStructureFile load_poly(const std::string& name) {
  return parse_poly_structure(load_json_file(std::string(TWISTMOD_DATA) + "/" + name));
}

Multivector named(const TwistedStructure& s, const std::string& name, Rational c) {
  const auto& names = s.algebra().names();
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return Multivector::monomial(s.dim(), Mask{1} << i, c);
  throw InputError("no basis vector named " + name);
}

}  // namespace

int main() {
  const std::vector<std::string> example_files = {
      "sl2.json",           "example5.json",          "example41.json",
      "maxrank_abelian4.json", "maxrank_heisenberg4.json", "rank2_background.json",
      "so3.json",           "unimodular_triangular.json"};

  criterion(1, "sl2 triangular: modular section is exactly 2 X+", [&] {
    auto s = load("sl2.json");
    return modular_section(s) == named(s, "Xp", rat(2));
  });

  criterion(2, "affine algebra: structure verifies, Y = X = e22 - e11, Z = 2(e22 - e11)", [&] {
    auto s = load("example5.json");
    auto expect = named(s, "e22", rat(1)) - named(s, "e11", rat(1));
    return verify_twisted(s).ok() && y_section(s) == expect && x_section(s) == expect &&
           modular_section(s) == expect * rat(2);
  });

  criterion(3, "2d triangular: X = 0, Z = 0, dual characteristic class -e1 nonzero", [&] {
    auto s = load("example41.json");
    auto xt = elw_class_of_dual(s);
    return x_section(s).is_zero() && modular_section(s).is_zero() &&
           xt == named(s, "e1", rat(-1)) && !xt.is_zero();
  });

  criterion(4, "maximal rank: abelian invertible and non-constant invertible are unimodular", [&] {
    auto s = load("maxrank_abelian4.json");
    // lambda in the file is omega^2 for the inverting form
    auto omega = inverse_form(s.pi());
    if (!omega || !(wedge(*omega, *omega) == s.lambda())) return false;
    if (!modular_section(s).is_zero() || !is_unimodular(s)) return false;
    // non-constant invertible tangent-bundle instance with d omega = psi
    auto f = load_poly("poly_symplectic_r4.json");
    // pi inverts a closed non-constant 2-form with unit Pfaffian
    PolyForm omega4(4);
    omega4.add_term(0b0011, Poly(1));
    omega4.add_term(0b1100, Poly(1));
    omega4.add_term(0b0101, Poly::var(0));
    for (int k = 0; k < 4; ++k) {
      PolyMultivector ek(4);
      ek.add_term(Mask{1} << k, Poly(1));
      if (!(sharp(f.pi, interior(ek, omega4)) == ek)) return false;
    }
    bool nonconstant = false;
    for (const auto& [m, c] : f.pi.terms())
      if (!c.is_constant()) nonconstant = true;
    if (!nonconstant) return false;
    if (!(de_rham(omega4) == f.psi)) return false;  // psi = d omega (both zero here)
    if (!(wedge(omega4, omega4) == f.lambda)) return false;
    if (!verify_twisted_poly(f.pi, f.psi).ok()) return false;
    return modular_vector_field(f.pi, f.psi, f.lambda).is_zero();
  });

  criterion(5, "vanishing triple contraction: Y = 0 and Z matches the background-free section", [&] {
    auto s = load("rank2_background.json");
    if (s.psi().is_zero() || psi2(s).is_zero()) return false;
    if (!sharp_power(s.pi(), s.psi()).is_zero()) return false;
    if (!y_section(s).is_zero()) return false;
    TwistedStructure plain(s.algebra(), s.pi(), Form(s.dim()), s.lambda());
    return modular_section(s) == modular_section(plain);
  });

  criterion(6, "square-zero suite on every example structure", [&] {
    for (const auto& name : example_files) {
      auto s = load(name);
      const auto& d = s.derived();
      if (!squares_to_zero(d.bv)) return false;
      if (!squares_to_zero(d.bv_lambda)) return false;
      if (!squares_to_zero(d.d_pi_psi)) return false;
      if (!d.d_pi_psi.apply(modular_section(s)).is_zero()) return false;
    }
    return true;
  });

  criterion(7, "identity suite, 20 seeded random trials at N = 4", [&] {
    LieAlgebra pool[3] = {
        LieAlgebra({"a", "b", "c", "d"}, {{{0, 1}, {{0, rat(1)}}}, {{2, 3}, {{2, rat(1)}}}}),
        LieAlgebra({"a", "b", "c", "d"}, {{{0, 1}, {{2, rat(1)}}}}),
        LieAlgebra({"H", "Xp", "Xm", "c"},
                   {{{0, 1}, {{1, rat(2)}}}, {{0, 2}, {{2, rat(-2)}}}, {{1, 2}, {{0, rat(1)}}}})};
    int counts[3] = {7, 7, 6};  // 20 trials in total
    for (int i = 0; i < 3; ++i) {
      auto res = identity_suite(pool[i], 1000 + i, counts[i]);
      if (!res.all()) {
        std::printf("        first failure: %s\n", res.counterexample.c_str());
        return false;
      }
      // the suite must have exercised the conditional identities too
      if (!res.results.count("chain") || !res.results.count("coboundary")) return false;
    }
    return true;
  });

  criterion(8, "operator order suite on the affine example", [&] {
    auto s = load("example5.json");
    const auto& d = s.derived();
    if (operator_order(d.i_pi) != 2) return false;
    if (!is_derivation(d.delta) || !is_derivation(d.d_underline)) return false;
    if (operator_order(d.del_underline) != 2) return false;
    if (!d.del_underline.apply(Form::unit(s.dim())).is_zero()) return false;
    for (int k = 0; k < s.dim(); ++k)
      if (!d.del_underline.apply(Form::monomial(s.dim(), Mask{1} << k)).is_zero()) return false;
    return true;
  });

  criterion(9, "characteristic-class comparison: sl2 factor two, 2d example splits", [&] {
    auto sl = load("sl2.json");
    if (!half_class_criterion(sl)) return false;
    auto xt = elw_class_of_dual(sl);
    if (!(xt == modular_section(sl) * rat(2)) || !(xt == named(sl, "Xp", rat(4)))) return false;
    auto s41 = load("example41.json");
    if (half_class_criterion(s41)) return false;
    return x_section(s41).is_zero() && elw_class_of_dual(s41) == named(s41, "e1", rat(-1));
  });

  criterion(10, "tangent-bundle factor two on three instances", [&] {
    for (const auto& name :
         {"poly_symplectic_r2.json", "poly_linear_r2.json", "poly_twisted_r3.json"}) {
      auto f = load_poly(name);
      auto rep = elw_factor_two(f.pi, f.psi, f.lambda);
      if (!rep.equal) return false;
    }
    return true;
  });

  criterion(11, "gauge suite: structure preserved and modular correspondence", [&] {
    // constant-coefficient instance
    auto f2 = load_poly("poly_symplectic_r2.json");
    auto g2 = gauge_transform(f2.pi, f2.psi, *f2.gauge_field);
    if (!verify_twisted_poly(g2.pi_prime, g2.psi_prime).ok()) return false;
    auto c2 = gauge_modular_correspondence(f2.pi, f2.psi, *f2.gauge_field, f2.lambda, 6);
    if (!c2.coboundary_found || !(c2.z_prime == c2.target)) return false;
    // twisted instance with a gauge field that genuinely moves pi
    auto f3 = load_poly("poly_twisted_r3.json");
    auto g3 = gauge_transform(f3.pi, f3.psi, *f3.gauge_field);
    if (g3.pi_prime == f3.pi) return false;
    if (!verify_twisted_poly(g3.pi_prime, g3.psi_prime).ok()) return false;
    auto c3 = gauge_modular_correspondence(f3.pi, f3.psi, *f3.gauge_field, f3.lambda, 6);
    return c3.coboundary_found;
  });

  criterion(12, "canonical 3-form closed and contraction identity (sl2, so3)", [&] {
    for (const auto& name : {"sl2.json", "so3.json"}) {
      auto s = load(name);
      const auto& g = s.algebra();
      auto psi = cartan_3form(g);
      if (psi.is_zero()) return false;
      if (!ce_differential(g, psi).is_zero()) return false;
      for (int k = 0; k < g.dim(); ++k) {
        auto x = Multivector::monomial(g.dim(), Mask{1} << k);
        if (!(interior(x, psi) == ce_differential(g, metric_flat(g, x)) * rat(-1, 2)))
          return false;
      }
    }
    return true;
  });

  criterion(13, "duality of betti numbers on unimodular instances", [&] {
    int checked = 0;
    for (const auto& name :
         {"maxrank_abelian4.json", "unimodular_triangular.json", "so3.json"}) {
      auto s = load(name);
      if (!is_unimodular(s)) return false;
      auto rep = duality_check(s);
      if (!rep.isomorphic) return false;
      ++checked;
    }
    return checked >= 2;
  });

  criterion(14, "the constant field -d1 is not globally hamiltonian for the linear structure", [&] {
    auto f = load_poly("poly_linear_r2.json");
    PolyMultivector v(2);
    v.add_term(Mask{1}, Poly(-1));
    if (!not_globally_hamiltonian(f.pi, v, 6)) return false;
    // sanity of the search itself: a constructed coboundary is found
    auto u = Poly::var(0) * Poly::var(1);
    auto img = schouten_fields(f.pi, PolyMultivector::scalar(2, u));
    return !not_globally_hamiltonian(f.pi, img, 4);
  });

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return 1;
}
