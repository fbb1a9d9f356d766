#pragma once

// Experiment documents, verdict reports and CSV traces.
//
//   {"name": "sum_failure",
//    "sequence": {"form": "sq_ratio", "params": {}, "n_min": 1, "n_max": 2500000},
//    "partner":  {"form": "sq_ratio", "params": {}, "n_min": 1, "n_max": 2500000},
//    "membership": {"default": 0, "rules": [...]},
//    "mu": {"self_minus(1)": {"form": "rational_poly", "params": {"num": [0,0,1], "den": [1,6,12,8]}},
//           "sum": {...}},
//    "candidates": {"self": [1], "sum": [0, {"value": 2}]},
//    "eps": [0.1, 0.01], "horizon": 2500000, "bound_probe": 1e6}
//
// Sequence forms: log_plus {c}, exp_plus {c}, sq_ratio {scale, offset}, moebius {a,b,c,d},
// constant {value}, custom_table {values} (values[i] is the term at n_min + i).
// Expression tags: self, partner, sum, product, each optionally suffixed with _minus(l);
// sum_with(partner) and product_with(partner) are accepted spellings of sum and product.
// A plain candidate list applies to self. Membership defaults to crisp (1 everywhere).

#include <cstdio>
#include <optional>
#include <ostream>
#include <regex>
#include <string>
#include <vector>

#include <json.hpp>

#include "fuzzyfield/errors.hpp"
#include "fuzzyfield/mu_spec.hpp"
#include "fuzzyfield/sequences.hpp"

namespace fuzzyfield::io {

inline double parse_offset(const std::string& text, const std::string& path) {
  static const std::regex fraction(R"(\s*([-+]?[0-9.eE+-]+)\s*/\s*([-+]?[0-9.eE+-]+)\s*)");
  std::smatch m;
  try {
    if (std::regex_match(text, m, fraction)) return std::stod(m[1]) / std::stod(m[2]);
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(path, "cannot read offset '" + text + "'");
}

inline Expr parse_expr(const std::string& name, const std::string& path) {
  if (name == "self") return Expr::self;
  if (name == "partner") return Expr::partner;
  if (name == "sum" || name == "sum_with(partner)") return Expr::sum;
  if (name == "product" || name == "product_with(partner)") return Expr::product;
  throw ParseError(path, "unknown expression '" + name + "'");
}

/// "self_minus(1)" -> {self, 1}; "sum" -> {sum, 0}.
inline std::pair<Expr, double> parse_tag(const std::string& tag, const std::string& path) {
  static const std::regex minus(R"((self|partner|sum|product)_minus\((.+)\))");
  std::smatch m;
  if (std::regex_match(tag, m, minus)) return {parse_expr(m[1], path), parse_offset(m[2], path)};
  return {parse_expr(tag, path), 0.0};
}

inline std::string tag_name(Expr expr, double offset) {
  if (offset == 0.0) return to_string(expr);
  return std::string(to_string(expr)) + "_minus(" + Json(offset).dump() + ")";
}

inline SequenceSpec parse_sequence(const Json& v, const std::string& path) {
  const auto id = detail::string(detail::require(v, path, "form"), path + "/form");
  const auto pit = v.find("params");
  const Json params = pit == v.end() ? Json::object() : *pit;
  const auto ppath = path + "/params";
  SequenceSpec s;
  if (id == "constant") {
    s.form = ConstantValue{detail::number_or(params, ppath, "value", 0.0)};
  } else if (id == "custom_table" || id == "custom-table") {
    const auto tit = params.find("values");
    const Json& values = tit != params.end() ? *tit : detail::require(v, path, "values");
    s.form = TableValues{detail::numbers(values, tit != params.end() ? ppath + "/values" : path + "/values")};
    if (std::get<TableValues>(s.form).values.empty()) throw ParseError(path, "custom table is empty");
  } else {
    s.form = std::visit([](auto f) -> SequenceForm { return f; }, parse_family_form(id, params, ppath));
  }
  s.n_min = v.contains("n_min") ? detail::index(v["n_min"], path + "/n_min") : 1;
  if (v.contains("n_max")) {
    s.n_max = detail::index(v["n_max"], path + "/n_max");
  } else {
    s.n_max = std::holds_alternative<TableValues>(s.form) ? s.cap() : std::min<Index>(s.cap(), 100'000);
  }
  return s;
}

inline Json sequence_to_json(const SequenceSpec& s) {
  Json j = std::visit(fuzzyfield::detail::overloaded{
                          [](const ConstantValue& c) { return Json{{"form", "constant"}, {"params", {{"value", c.value}}}}; },
                          [](const TableValues& t) { return Json{{"form", "custom_table"}, {"params", {{"values", t.values}}}}; },
                          [](const auto& f) { return family_form_to_json(FamilyForm{f}); },
                      },
                      s.form);
  if (std::holds_alternative<LogPlus>(s.form)) j["form"] = "log_plus";
  if (std::holds_alternative<ExpPlus>(s.form)) j["form"] = "exp_plus";
  j["n_min"] = s.n_min;
  j["n_max"] = s.n_max;
  return j;
}

inline Tolerances parse_tolerances(const Json& v, const std::string& path) {
  Tolerances t;
  t.eq = detail::number_or(v, path, "eq", t.eq);
  t.identity = detail::number_or(v, path, "identity", t.identity);
  t.min_mu = detail::number_or(v, path, "min_mu", t.min_mu);
  return t;
}

inline Target parse_target(Expr expr, const Json& v, const std::string& path) {
  if (v.is_number()) return Target{expr, v.get<double>(), std::nullopt};
  Target t{expr, detail::number(detail::require(v, path, "value"), path + "/value"), std::nullopt};
  if (v.contains("envelope")) t.envelope = detail::string(v["envelope"], path + "/envelope");
  return t;
}

/// Parses and validates an experiment. `tol_override` replaces eq/identity tolerances (CLI --tol).
inline ExperimentSpec load_experiment(const Json& doc, std::optional<double> tol_override = std::nullopt) {
  if (!doc.is_object()) throw ParseError("/", "expected an object");
  ExperimentSpec e;
  if (doc.contains("name")) e.name = detail::string(doc["name"], "/name");
  e.primary = parse_sequence(detail::require(doc, "", "sequence"), "/sequence");
  if (doc.contains("partner")) e.partner = parse_sequence(doc["partner"], "/partner");

  Tolerances tol = doc.contains("tolerances") ? parse_tolerances(doc["tolerances"], "/tolerances") : Tolerances{};
  if (tol_override) tol.eq = tol.identity = *tol_override;
  MembershipFunction mu = membership::crisp();
  if (doc.contains("membership")) {
    try {
      mu = load_mu_spec(doc["membership"]);
    } catch (const ParseError& err) {
      throw err.nested_under("/membership");
    }
  }
  e.context = FieldContext(ScalarKind::real, std::move(mu), tol);

  if (doc.contains("mu")) {
    const Json& m = doc["mu"];
    if (!m.is_object()) throw ParseError("/mu", "expected an object mapping tags to weight forms");
    for (const auto& [tag, form] : m.items()) {
      const auto path = "/mu/" + tag;
      const auto [expr, offset] = parse_tag(tag, path);
      e.assignment.entries.push_back(MuAssignmentEntry{expr, offset, parse_mu_form(form, path)});
    }
  }

  const Json& cands = detail::require(doc, "", "candidates");
  if (cands.is_array()) {
    for (std::size_t i = 0; i < cands.size(); ++i) e.targets.push_back(parse_target(Expr::self, cands[i], "/candidates/" + std::to_string(i)));
  } else if (cands.is_object()) {
    for (const auto& [name, list] : cands.items()) {
      const auto path = "/candidates/" + name;
      const Expr expr = parse_expr(name, path);
      if (!list.is_array()) throw ParseError(path, "expected an array of candidates");
      for (std::size_t i = 0; i < list.size(); ++i) e.targets.push_back(parse_target(expr, list[i], path + "/" + std::to_string(i)));
    }
  } else {
    throw ParseError("/candidates", "expected an array or an object of arrays");
  }

  if (doc.contains("eps")) e.eps_schedule = detail::numbers(doc["eps"], "/eps");
  e.horizon = doc.contains("horizon") ? detail::index(doc["horizon"], "/horizon") : std::min(e.horizon, e.primary.n_max);
  e.bound_probe = detail::number_or(doc, "", "bound_probe", e.bound_probe);
  if (doc.contains("notes")) {
    for (const auto& n : doc["notes"]) e.notes.push_back(detail::string(n, "/notes"));
  }
  e.validate();
  return e;
}

inline ExperimentSpec load_experiment(const std::string& text, std::optional<double> tol_override = std::nullopt) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& err) {
    throw ParseError("/", err.what());
  }
  return load_experiment(doc, tol_override);
}

inline ExperimentSpec load_experiment(const char* text, std::optional<double> tol_override = std::nullopt) {
  return load_experiment(std::string(text), tol_override);
}

inline Json to_json(const ExperimentSpec& e) {
  Json j{{"name", e.name}, {"sequence", sequence_to_json(e.primary)}};
  if (e.partner) j["partner"] = sequence_to_json(*e.partner);
  j["membership"] = to_json(e.context.mu());
  const auto& t = e.context.tolerances();
  j["tolerances"] = Json{{"eq", t.eq}, {"identity", t.identity}, {"min_mu", t.min_mu}};
  Json mu = Json::object();
  for (const auto& a : e.assignment.entries) mu[tag_name(a.expr, a.offset)] = mu_form_to_json(a.form);
  j["mu"] = mu;
  Json cands = Json::object();
  for (const auto& target : e.targets) {
    Json c = target.envelope ? Json{{"value", target.candidate}, {"envelope", *target.envelope}} : Json(target.candidate);
    cands[to_string(target.expr)].push_back(c);
  }
  j["candidates"] = cands;
  j["eps"] = e.eps_schedule;
  j["horizon"] = e.horizon;
  j["bound_probe"] = e.bound_probe;
  j["notes"] = e.notes;
  return j;
}

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const ConvergenceVerdict& v) {
  Json rows = Json::array();
  for (const auto& r : v.eps_table) rows.push_back(Json{{"eps", r.eps}, {"N", r.n ? Json(*r.n) : Json(nullptr)}});
  Json cert = nullptr;
  if (v.tail_certificate) {
    cert = Json{{"kind", to_string(v.tail_certificate->kind)}, {"from", v.tail_certificate->from}};
    if (!v.tail_certificate->form.empty()) cert["form"] = v.tail_certificate->form;
  }
  return Json{{"expr", to_string(v.expr)},
              {"candidate", v.candidate},
              {"status", to_string(v.status)},
              {"start", v.start},
              {"horizon", v.horizon},
              {"tail_start", v.tail_start},
              {"trivial_tail_fraction", v.trivial_tail_fraction},
              {"tail_certificate", cert},
              {"eps_table", rows}};
}

inline Json to_json(const BoundsReport& b) {
  auto opt = [](const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); };
  return Json{{"sup_mu", opt(b.sup_mu)},
              {"inf_mu", opt(b.inf_mu)},
              {"sup_witness", b.sup_witness},
              {"inf_witness", b.inf_witness},
              {"max_abs_scaled", b.max_abs_scaled},
              {"max_abs_raw", b.max_abs_raw},
              {"probe", b.probe},
              {"within_probe", b.within_probe},
              {"first_exceeding_index", b.first_exceeding_index ? Json(*b.first_exceeding_index) : Json(nullptr)}};
}

inline Json to_json(const ExperimentReport& r) {
  Json verdicts = Json::array();
  for (const auto& v : r.verdicts) verdicts.push_back(to_json(v));
  Json arithmetic = Json::array();
  for (const auto& a : r.arithmetic) {
    arithmetic.push_back(Json{{"expr", to_string(a.expr)}, {"l", a.l}, {"m", a.m}, {"expected", a.expected},
                              {"status", to_string(a.verdict.status)}});
  }
  Json observed = Json::array();
  for (const auto& [expr, l] : r.observed_limits) observed.push_back(Json{{"expr", to_string(expr)}, {"limit", l}});
  auto classical = [](const std::optional<ConvergenceVerdict>& v) {
    return v ? Json{{"limit", v->candidate}, {"status", to_string(v->status)}} : Json(nullptr);
  };
  return Json{{"name", r.name},
              {"verdicts", verdicts},
              {"classical", {{"primary", classical(r.classical_primary)}, {"partner", classical(r.classical_partner)}}},
              {"arithmetic", arithmetic},
              {"observed_limits", observed},
              {"bounds", to_json(r.bounds)}};
}

/// CSV rows n, term, membership, scaled_deviation for one tracked expression and candidate.
inline void write_trace_csv(std::ostream& out, const ExperimentSpec& e, Expr expr, double candidate) {
  const auto t = trace_deviation(e, expr, candidate);
  out << "n,term,membership,scaled_deviation\n";
  char buf[128];
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g\n", static_cast<long long>(t.index_of(i)), t.term[i],
                  t.weight[i], t.deviation[i]);
    out << buf;
  }
}

}  // namespace fuzzyfield::io
