#pragma once

// JSON documents for membership functions.
//
//   {"default": 0.0,
//    "rules": [
//      {"match": {"kind": "point", "value": 0, "tol": 1e-9}, "mu": 1.0},
//      {"match": {"kind": "set", "values": [1, [0, 1]]}, "mu": 0.3},
//      {"match": {"kind": "family", "form": "log_n_plus_c", "params": {"c": 1},
//                 "n_min": 1, "n_max": 100000},
//       "mu": {"form": "rational_poly", "params": {"num": [0, 1], "den": [1, 3, 3, 1]}}}]}
//
// Scalars are numbers or [re, im] pairs.

#include <string>
#include <vector>

#include <json.hpp>

#include "fuzzyfield/errors.hpp"
#include "fuzzyfield/membership.hpp"

namespace fuzzyfield::io {

using Json = nlohmann::json;

namespace detail {

inline std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
inline std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

inline const Json& require(const Json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(child(path, key), "missing required field");
  return *it;
}

inline double number(const Json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path, "expected a number");
  return v.get<double>();
}

inline double number_or(const Json& obj, const std::string& path, const char* key, double fallback) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, child(path, key));
}

inline Index index(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ParseError(path, "expected an integer");
  return v.get<Index>();
}

inline std::vector<double> numbers(const Json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], child(path, i)));
  return out;
}

inline std::string string(const Json& v, const std::string& path) {
  if (!v.is_string()) throw ParseError(path, "expected a string");
  return v.get<std::string>();
}

}  // namespace detail

inline Complex parse_scalar(const Json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ParseError(path, "expected a number or an [re, im] pair");
}

inline Json scalar_to_json(Complex v) {
  if (v.imag() == 0.0) return v.real();
  return Json::array({v.real(), v.imag()});
}

inline std::vector<Complex> parse_scalars(const Json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError(path, "expected an array of scalars");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(parse_scalar(v[i], detail::child(path, i)));
  return out;
}

inline FamilyForm parse_family_form(const std::string& id, const Json& params, const std::string& path) {
  if (!params.is_object()) throw ParseError(path, "expected an object of numbers");
  using detail::number_or;
  if (id == "log_n_plus_c" || id == "log_plus") return LogPlus{number_or(params, path, "c", 0.0)};
  if (id == "exp_n_plus_c" || id == "exp_plus") return ExpPlus{number_or(params, path, "c", 0.0)};
  if (id == "sq_ratio") {
    return SquareRatio{number_or(params, path, "scale", 1.0), number_or(params, path, "offset", 0.0)};
  }
  if (id == "moebius") {
    return Moebius{number_or(params, path, "a", 1.0), number_or(params, path, "b", 0.0),
                   number_or(params, path, "c", 0.0), number_or(params, path, "d", 1.0)};
  }
  throw ParseError(path, "unknown family form '" + id + "'");
}

inline Json family_form_to_json(const FamilyForm& form) {
  Json params = std::visit(fuzzyfield::detail::overloaded{
                               [](const LogPlus& f) { return Json{{"c", f.c}}; },
                               [](const ExpPlus& f) { return Json{{"c", f.c}}; },
                               [](const SquareRatio& f) { return Json{{"scale", f.scale}, {"offset", f.offset}}; },
                               [](const Moebius& f) { return Json{{"a", f.a}, {"b", f.b}, {"c", f.c}, {"d", f.d}}; },
                           },
                           form);
  return Json{{"form", form_id(form)}, {"params", params}};
}

inline MuForm parse_mu_form(const Json& v, const std::string& path) {
  const auto id = detail::string(detail::require(v, path, "form"), detail::child(path, "form"));
  const auto pit = v.find("params");
  const Json params = pit == v.end() ? Json::object() : *pit;
  const auto ppath = detail::child(path, "params");
  if (!params.is_object()) throw ParseError(ppath, "expected an object");
  if (id == "const") return ConstWeight{detail::number(detail::require(params, ppath, "value"), ppath + "/value")};
  if (id == "rational_poly") {
    RationalWeight w{detail::numbers(detail::require(params, ppath, "num"), ppath + "/num"),
                     detail::numbers(detail::require(params, ppath, "den"), ppath + "/den")};
    if (w.den.empty()) throw ParseError(ppath + "/den", "denominator needs at least one coefficient");
    return w;
  }
  if (id == "inv_exp_p1_sq") return InvExpPlusOneSquared{};
  throw ParseError(detail::child(path, "form"), "unknown weight form '" + id + "'");
}

inline Json mu_form_to_json(const MuForm& form) {
  Json params = std::visit(fuzzyfield::detail::overloaded{
                               [](const ConstWeight& w) { return Json{{"value", w.value}}; },
                               [](const RationalWeight& w) { return Json{{"num", w.num}, {"den", w.den}}; },
                               [](const InvExpPlusOneSquared&) { return Json::object(); },
                           },
                           form);
  return Json{{"form", form_id(form)}, {"params", params}};
}

inline Matcher parse_matcher(const Json& v, const std::string& path) {
  const auto kind = detail::string(detail::require(v, path, "kind"), detail::child(path, "kind"));
  const double tol = detail::number_or(v, path, "tol", kDefaultMatchTol);
  if (kind == "point") return PointMatcher{parse_scalar(detail::require(v, path, "value"), path + "/value"), tol};
  if (kind == "set") return SetMatcher{parse_scalars(detail::require(v, path, "values"), path + "/values"), tol};
  if (kind == "family") {
    const auto id = detail::string(detail::require(v, path, "form"), path + "/form");
    const auto pit = v.find("params");
    const Json params = pit == v.end() ? Json::object() : *pit;
    FamilyMatcher m{parse_family_form(id, params, path + "/params"), 1, 1, tol};
    m.n_min = detail::index(detail::require(v, path, "n_min"), path + "/n_min");
    m.n_max = detail::index(detail::require(v, path, "n_max"), path + "/n_max");
    return m;
  }
  throw ParseError(detail::child(path, "kind"), "expected one of point, set, family");
}

inline Json matcher_to_json(const Matcher& m) {
  return std::visit(fuzzyfield::detail::overloaded{
                        [](const PointMatcher& p) {
                          return Json{{"kind", "point"}, {"value", scalar_to_json(p.value)}, {"tol", p.tol}};
                        },
                        [](const SetMatcher& s) {
                          Json values = Json::array();
                          for (const auto& v : s.values) values.push_back(scalar_to_json(v));
                          return Json{{"kind", "set"}, {"values", values}, {"tol", s.tol}};
                        },
                        [](const FamilyMatcher& f) {
                          Json j = family_form_to_json(f.form);
                          j["kind"] = "family";
                          j["n_min"] = f.n_min;
                          j["n_max"] = f.n_max;
                          j["tol"] = f.tol;
                          return j;
                        },
                    },
                    m);
}

/// Parses and validates a membership document. Throws ParseError or ValidationError.
inline MembershipFunction load_mu_spec(const Json& doc) {
  const std::string root;
  if (!doc.is_object()) throw ParseError("/", "expected an object");
  const double fallback = detail::number(detail::require(doc, root, "default"), "/default");
  const auto it = doc.find("rules");
  std::vector<MuRule> rules;
  if (it != doc.end()) {
    if (!it->is_array()) throw ParseError("/rules", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto path = detail::child("/rules", i);
      const Json& r = (*it)[i];
      Matcher matcher = parse_matcher(detail::require(r, path, "match"), path + "/match");
      const Json& mu = detail::require(r, path, "mu");
      if (mu.is_number()) {
        rules.push_back(MuRule{std::move(matcher), mu.get<double>()});
      } else if (mu.is_object()) {
        rules.push_back(MuRule{std::move(matcher), parse_mu_form(mu, path + "/mu")});
      } else {
        throw ParseError(path + "/mu", "expected a number or a weight form object");
      }
    }
  }
  return MembershipFunction{std::move(rules), fallback};
}

inline MembershipFunction load_mu_spec(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("/", e.what());
  }
  return load_mu_spec(doc);
}

inline MembershipFunction load_mu_spec(const char* text) { return load_mu_spec(std::string(text)); }

inline Json to_json(const MembershipFunction& mu) {
  Json rules = Json::array();
  for (const auto& r : mu.rules()) {
    Json weight = std::holds_alternative<double>(r.weight) ? Json(std::get<double>(r.weight))
                                                           : mu_form_to_json(std::get<MuForm>(r.weight));
    rules.push_back(Json{{"match", matcher_to_json(r.matcher)}, {"mu", weight}});
  }
  return Json{{"default", mu.default_weight()}, {"rules", rules}};
}

}  // namespace fuzzyfield::io
