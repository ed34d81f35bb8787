#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "twistmod/poly_geometry.hpp"
#include "twistmod/twisted.hpp"

namespace twistmod {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// ---- structure files --------------------------------------------------------
//
// Lie case:
//   {"algebra": {"basis": ["H","Xp","Xm"],
//                "brackets": [{"x":"H","y":"Xp","value":{"Xp":"2"}}, ...],
//                "bilinear_form": [["2","0","0"],...]   (optional)},
//    "pi": [{"indices":["Xp","H"],"coeff":"1"}, ...],
//    "psi": [...], "lambda": [...]}
//
// Tangent case ("base_dim" marks it):
//   {"base_dim": 3,
//    "pi": [{"indices":["d1","d2"],
//            "coeff":[{"monomial":[1,0,0],"coeff":"1"}, ...]}, ...],
//    "psi": [... with "dx1".."dxn" ...], "lambda": [...], "B": [...]}
//
// Term lists wedge their factors in the listed order, so signs follow the
// written orientation; coefficients are always "p/q" strings.

namespace detail {

inline const Json& field(const Json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing field \"" + key + "\"");
  return *it;
}

inline int name_index(const std::map<std::string, int>& names, const std::string& name,
                      const std::string& where) {
  auto it = names.find(name);
  if (it == names.end()) throw InputError(where + ": unknown basis name \"" + name + "\"");
  return it->second;
}

inline std::pair<Mask, int> wedge_mask(const Json& indices, const std::map<std::string, int>& names,
                                       const std::string& where) {
  Mask m = 0;
  int sign = 1;
  for (const auto& entry : indices) {
    int i = name_index(names, entry.get<std::string>(), where);
    int s = wedge_sign(m, Mask{1} << i);
    if (s == 0) return {0, 0};  // repeated factor: the term vanishes
    sign *= s;
    m |= Mask{1} << i;
  }
  return {m, sign};
}

}  // namespace detail

template <class Tag>
ExtElement<Tag> parse_element(const Json& j, int dim, const std::map<std::string, int>& names,
                              const std::string& where) {
  ExtElement<Tag> x(dim);
  if (j.is_null()) return x;
  if (!j.is_array()) throw InputError(where + ": expected an array of terms");
  int pos = 0;
  for (const auto& term : j) {
    std::string at = where + "[" + std::to_string(pos++) + "]";
    auto [m, sign] = detail::wedge_mask(detail::field(term, "indices", at), names, at);
    if (sign == 0) continue;
    Rational c = rat_parse(detail::field(term, "coeff", at).get<std::string>());
    x.add_term(m, Rational(c * sign));
  }
  return x;
}

inline LieAlgebra parse_lie_algebra(const Json& j, std::map<std::string, int>* names_out) {
  const auto& basis = detail::field(j, "basis", "algebra");
  std::vector<std::string> names;
  std::map<std::string, int> index;
  for (const auto& n : basis) {
    std::string s = n.get<std::string>();
    if (!index.emplace(s, static_cast<int>(names.size())).second)
      throw InputError("algebra.basis: duplicate name \"" + s + "\"");
    names.push_back(s);
  }
  std::map<std::pair<int, int>, std::map<int, Rational>> constants;
  if (j.contains("brackets")) {
    int pos = 0;
    for (const auto& b : j["brackets"]) {
      std::string at = "algebra.brackets[" + std::to_string(pos++) + "]";
      int x = detail::name_index(index, detail::field(b, "x", at).get<std::string>(), at);
      int y = detail::name_index(index, detail::field(b, "y", at).get<std::string>(), at);
      if (x == y) throw InputError(at + ": bracket of a generator with itself");
      int sign = 1;
      if (x > y) {
        std::swap(x, y);
        sign = -1;
      }
      auto key = std::make_pair(x, y);
      if (constants.count(key)) throw InputError(at + ": duplicate bracket entry");
      std::map<int, Rational> row;
      for (const auto& [name, val] : detail::field(b, "value", at).items()) {
        int k = detail::name_index(index, name, at);
        row[k] = rat_parse(val.get<std::string>()) * sign;
      }
      constants[key] = std::move(row);
    }
  }
  std::optional<MatQ> form;
  if (j.contains("bilinear_form") && !j["bilinear_form"].is_null()) {
    const auto& g = j["bilinear_form"];
    MatQ m(static_cast<int>(names.size()), static_cast<int>(names.size()));
    if (g.size() != names.size()) throw InputError("bilinear_form: wrong number of rows");
    for (size_t r = 0; r < g.size(); ++r) {
      if (g[r].size() != names.size()) throw InputError("bilinear_form: wrong row length");
      for (size_t c = 0; c < g[r].size(); ++c)
        m.at(static_cast<int>(r), static_cast<int>(c)) = rat_parse(g[r][c].get<std::string>());
    }
    form = std::move(m);
  }
  if (names_out) *names_out = index;
  return LieAlgebra(std::move(names), std::move(constants), std::move(form));
}

struct LieStructureFile {
  TwistedStructure structure;
  std::map<std::string, int> names;
};

inline LieStructureFile parse_lie_structure(const Json& j) {
  std::map<std::string, int> names;
  LieAlgebra g = parse_lie_algebra(detail::field(j, "algebra", "structure"), &names);
  const int n = g.dim();
  auto pi = parse_element<VectorKindTag>(j.value("pi", Json::array()), n, names, "pi");
  auto psi = parse_element<FormKindTag>(j.value("psi", Json::array()), n, names, "psi");
  auto lambda = parse_element<FormKindTag>(detail::field(j, "lambda", "structure"), n, names,
                                           "lambda");
  return {TwistedStructure(std::move(g), std::move(pi), std::move(psi), std::move(lambda)),
          std::move(names)};
}

// ---- polynomial structures --------------------------------------------------

inline Poly parse_poly(const Json& j, int n, const std::string& where) {
  Poly p;
  if (j.is_null()) return p;
  if (j.is_string()) return Poly(rat_parse(j.get<std::string>()));
  int pos = 0;
  for (const auto& term : j) {
    std::string at = where + "[" + std::to_string(pos++) + "]";
    const auto& mono = detail::field(term, "monomial", at);
    if (static_cast<int>(mono.size()) != n)
      throw InputError(at + ": monomial length must equal base_dim");
    Poly::Exponents e;
    for (const auto& x : mono) e.push_back(x.get<unsigned>());
    p.add_term(std::move(e), rat_parse(detail::field(term, "coeff", at).get<std::string>()));
  }
  return p;
}

template <class Tag>
ExtElement<Tag, Poly> parse_poly_element(const Json& j, int n,
                                         const std::map<std::string, int>& names,
                                         const std::string& where) {
  ExtElement<Tag, Poly> x(n);
  if (j.is_null()) return x;
  int pos = 0;
  for (const auto& term : j) {
    std::string at = where + "[" + std::to_string(pos++) + "]";
    auto [m, sign] = detail::wedge_mask(detail::field(term, "indices", at), names, at);
    if (sign == 0) continue;
    Poly c = parse_poly(detail::field(term, "coeff", at), n, at);
    x.add_term(m, c * sign);
  }
  return x;
}

struct PolyStructureFile {
  int n;
  PolyMultivector pi;
  PolyForm psi;
  PolyForm lambda;
  std::optional<PolyForm> gauge_field;
  PolyStructureFile(int dim) : n(dim), pi(dim), psi(dim), lambda(dim) {}
};

inline PolyStructureFile parse_poly_structure(const Json& j) {
  int n = detail::field(j, "base_dim", "structure").get<int>();
  poly_check_dim(n);
  std::map<std::string, int> vec_names, form_names;
  for (int i = 0; i < n; ++i) {
    vec_names["d" + std::to_string(i + 1)] = i;
    form_names["dx" + std::to_string(i + 1)] = i;
  }
  PolyStructureFile f(n);
  f.pi = parse_poly_element<VectorKindTag>(j.value("pi", Json::array()), n, vec_names, "pi");
  f.psi = parse_poly_element<FormKindTag>(j.value("psi", Json::array()), n, form_names, "psi");
  f.lambda = parse_poly_element<FormKindTag>(detail::field(j, "lambda", "structure"), n,
                                             form_names, "lambda");
  if (j.contains("B") && !j["B"].is_null())
    f.gauge_field = parse_poly_element<FormKindTag>(j["B"], n, form_names, "B");
  return f;
}

// ---- serialization ----------------------------------------------------------

template <class Tag>
OrderedJson element_terms(const ExtElement<Tag>& x, const std::vector<std::string>& names) {
  OrderedJson out = OrderedJson::array();
  for (const auto& [m, c] : x.terms()) {
    OrderedJson term;
    OrderedJson idx = OrderedJson::array();
    for (int i : mask_indices(m)) idx.push_back(names[i]);
    term["indices"] = idx;
    term["coeff"] = rat_str(c);
    out.push_back(term);
  }
  return out;
}

inline OrderedJson poly_terms(const Poly& p, int n) {
  OrderedJson out = OrderedJson::array();
  for (const auto& [e, c] : p.terms()) {
    OrderedJson term;
    OrderedJson mono = OrderedJson::array();
    for (int i = 0; i < n; ++i)
      mono.push_back(static_cast<size_t>(i) < e.size() ? e[i] : 0u);
    term["monomial"] = mono;
    term["coeff"] = rat_str(c);
    out.push_back(term);
  }
  return out;
}

template <class Tag>
OrderedJson poly_element_terms(const ExtElement<Tag, Poly>& x, int n, bool forms) {
  OrderedJson out = OrderedJson::array();
  for (const auto& [m, c] : x.terms()) {
    OrderedJson term;
    OrderedJson idx = OrderedJson::array();
    for (int i : mask_indices(m))
      idx.push_back((forms ? "dx" : "d") + std::to_string(i + 1));
    term["indices"] = idx;
    term["coeff"] = poly_terms(c, n);
    out.push_back(term);
  }
  return out;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open \"" + path + "\"");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  return j;
}

}  // namespace twistmod
