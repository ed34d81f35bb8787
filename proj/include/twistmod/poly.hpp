#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "twistmod/rational.hpp"

namespace twistmod {

/// Sparse multivariate polynomial with exact rational coefficients.  Keys
/// are exponent vectors with trailing zeros trimmed, so the zero polynomial
/// needs no variable count and the representation is canonical.
class Poly {
 public:
  using Exponents = std::vector<unsigned>;

  Poly() = default;
  explicit Poly(Rational c) { add_term({}, std::move(c)); }
  explicit Poly(long c) : Poly(Rational(c)) {}

  static Poly var(int i, unsigned power = 1) {
    Poly p;
    Exponents e(i + 1, 0);
    e[i] = power;
    p.add_term(std::move(e), Rational(1));
    return p;
  }
  static Poly monomial(Exponents e, Rational c) {
    Poly p;
    p.add_term(std::move(e), std::move(c));
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
  }
  Rational constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_constant()) throw DegreeError("polynomial is not constant");
    return terms_.begin()->second;
  }
  const std::map<Exponents, Rational>& terms() const { return terms_; }

  int total_degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (unsigned x : e) s += static_cast<int>(x);
      if (s > d) d = s;
    }
    return d;
  }

  Poly& add_term(Exponents e, const Rational& c) {
    if (twistmod::is_zero(c)) return *this;
    while (!e.empty() && e.back() == 0) e.pop_back();
    auto [it, inserted] = terms_.emplace(std::move(e), c);
    if (!inserted) {
      it->second += c;
      if (twistmod::is_zero(it->second)) terms_.erase(it);
    }
    return *this;
  }

  Poly operator+(const Poly& o) const {
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }
  Poly operator-(const Poly& o) const {
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, Rational(-c));
    return r;
  }
  Poly& operator+=(const Poly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Poly operator-() const {
    Poly r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, Rational(-c));
    return r;
  }
  Poly operator*(const Poly& o) const {
    Poly r;
    for (const auto& [ea, ca] : terms_)
      for (const auto& [eb, cb] : o.terms_) {
        Exponents e(std::max(ea.size(), eb.size()), 0);
        for (size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
        for (size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
        r.add_term(std::move(e), Rational(ca * cb));
      }
    return r;
  }
  Poly operator*(const Rational& s) const {
    Poly r;
    if (twistmod::is_zero(s)) return r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, Rational(c * s));
    return r;
  }
  Poly operator*(int s) const { return *this * Rational(s); }
  Poly operator/(const Rational& s) const { return *this * Rational(1 / s); }

  bool operator==(const Poly& o) const { return terms_ == o.terms_; }

  /// Partial derivative with respect to variable i.
  Poly derivative(int i) const {
    Poly r;
    for (const auto& [e, c] : terms_) {
      if (static_cast<size_t>(i) >= e.size() || e[i] == 0) continue;
      Exponents d = e;
      d[i] -= 1;
      r.add_term(std::move(d), Rational(c * static_cast<long>(e[i])));
    }
    return r;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      os << (first ? "" : " + ") << rat_str(c);
      for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        os << "*x" << (i + 1);
        if (e[i] > 1) os << "^" << e[i];
      }
      first = false;
    }
    return os.str();
  }

 private:
  std::map<Exponents, Rational> terms_;
};

inline bool is_zero(const Poly& p) { return p.is_zero(); }
inline std::string scalar_str(const Poly& p) { return "(" + p.str() + ")"; }

}  // namespace twistmod
