#pragma once

// Command-line front end. Exit codes: 0 all checks pass, 1 a check failed or a domain
// error surfaced from a valid request, 2 invalid input or usage.

#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "fuzzyfield/fuzzyfield.hpp"

namespace fuzzyfield::cli {

using io::Json;

inline constexpr const char* kVersion = "1.0.0";

inline std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

struct InputFile {
  std::string path;
  std::string text;
  std::string digest;
};

inline InputFile read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return InputFile{path, buf.str(), sha256_hex(buf.str())};
}

/// "re,im" or "re".
inline Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(text, &used);
      if (used == text.size()) return {re, 0.0};
    } else {
      const std::string a = text.substr(0, comma);
      const std::string b = text.substr(comma + 1);
      std::size_t ua = 0;
      std::size_t ub = 0;
      const double re = std::stod(a, &ua);
      const double im = std::stod(b, &ub);
      if (ua == a.size() && ub == b.size()) return {re, im};
    }
  } catch (const std::exception&) {
  }
  throw UsageError("cannot read complex number '" + text + "' (expected re,im)");
}

inline std::string show(Complex z) {
  if (z.imag() == 0.0) return format("%.17g", z.real());
  return format("%.17g%+.17gi", z.real(), z.imag());
}

struct Session {
  bool json = false;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string command;
  std::vector<InputFile> inputs;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  Tolerances tolerances() const {
    Tolerances t;
    if (tol) t.eq = t.identity = *tol;
    return t;
  }

  int emit(const Json& body, const std::string& text, int status) const {
    if (json) {
      Json inputs_json = Json::array();
      for (const auto& f : inputs) inputs_json.push_back(Json{{"path", f.path}, {"sha256", f.digest}});
      Json env{{"tool", "fuzzyfield"},
               {"version", kVersion},
               {"command", command},
               {"inputs", inputs_json},
               {"seed", seed ? Json(*seed) : Json(nullptr)},
               {"body", body},
               {"exit_status", status}};
      *out << env.dump(2) << "\n";
    } else {
      *out << text;
    }
    return status;
  }

  int fail(const std::string& message, int status) const {
    if (json) return emit(Json{{"error", message}}, "", status);
    *err << "error: " << message << "\n";
    return status;
  }
};

inline MembershipFunction load_mu(Session& s, const std::string& path) {
  s.inputs.push_back(read_input(path));
  return io::load_mu_spec(s.inputs.back().text);
}

// ---------------------------------------------------------------------------
// axioms

inline std::vector<double> default_grid() {
  std::vector<double> g;
  for (int i = -8; i <= 8; ++i) g.push_back(i * 0.25);
  return g;
}

inline int cmd_axioms(Session& s, const std::string& mu_path, const std::string& samples_path) {
  const auto mu = load_mu(s, mu_path);
  std::vector<Complex> samples;
  if (samples_path.empty()) {
    for (const double v : default_grid()) samples.emplace_back(v);
  } else {
    s.inputs.push_back(read_input(samples_path));
    Json doc;
    try {
      doc = Json::parse(s.inputs.back().text);
    } catch (const Json::parse_error& e) {
      throw ParseError("/", e.what());
    }
    samples = io::parse_scalars(doc.is_object() && doc.contains("samples") ? doc["samples"] : doc,
                                doc.is_object() ? "/samples" : "");
  }
  bool complex_samples = false;
  for (const auto& z : samples) complex_samples = complex_samples || z.imag() != 0.0;
  const FieldContext ctx(complex_samples ? ScalarKind::complex : ScalarKind::real, mu, s.tolerances());
  const auto report = check_axioms(ctx, samples);
  const auto summary = mu_summary(ctx, samples);

  Json holds = Json::object();
  std::string text = format("axiom audit over %zu samples (sample-relative: pairs outside the samples are not checked)\n",
                            report.sample_count);
  for (const Axiom a : kAllAxioms) {
    holds[axiom_id(a)] = report.holds_axiom(a);
    text += format("  (%-3s) %-34s %s\n", axiom_id(a), axiom_statement(a), report.holds_axiom(a) ? "holds" : "VIOLATED");
  }
  text += format("  ii_symmetry mu(-a) = mu(a)               %s\n", report.negation_symmetric ? "yes" : "no");
  text += format("  inf mu over samples %.6g, zero-weight samples %zu\n", summary.inf_mu, summary.count_zero);
  Json violations = Json::array();
  for (std::size_t i = 0; i < report.violations.size(); ++i) {
    const auto& v = report.violations[i];
    Json ops = Json::array();
    std::string shown;
    for (const auto& z : v.operands) {
      ops.push_back(io::scalar_to_json(z));
      shown += (shown.empty() ? "" : ", ") + show(z);
    }
    violations.push_back(Json{{"axiom", axiom_id(v.axiom)}, {"operands", ops}, {"observed", v.observed}, {"required", v.required}});
    if (i < 10) text += format("  violation (%s) at [%s]: %.6g < %.6g\n", axiom_id(v.axiom), shown.c_str(), v.observed, v.required);
  }
  if (report.violations.size() > 10) text += format("  ... %zu violations in total\n", report.violations.size());
  Json asym = Json::array();
  for (const auto& z : report.asymmetric_points) asym.push_back(io::scalar_to_json(z));
  const Json body{{"sample_count", report.sample_count},
                  {"sample_relative", true},
                  {"holds", holds},
                  {"all_hold", report.all_hold()},
                  {"ii_symmetry", report.negation_symmetric},
                  {"asymmetric_points", asym},
                  {"inf_mu", summary.inf_mu},
                  {"zero_weight_samples", summary.count_zero},
                  {"violations", violations}};
  return s.emit(body, text, report.all_hold() ? 0 : 1);
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string op;
  std::string mu_path;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<std::string> z;
  std::optional<std::string> w;
  std::vector<double> set;
  int branch = 0;
};

inline const std::vector<std::string>& eval_ops() {
  static const std::vector<std::string> ops{"mu",     "scale",    "mu_compare", "mu_abs", "mu_sup", "mu_inf",
                                            "mu_conj", "mu_abs_c", "mu_arg",     "mu_exp", "mu_log", "mu_pow"};
  return ops;
}

inline int cmd_eval(Session& s, const EvalArgs& args) {
  if (std::find(eval_ops().begin(), eval_ops().end(), args.op) == eval_ops().end()) {
    std::string known;
    for (const auto& o : eval_ops()) known += (known.empty() ? "" : ", ") + o;
    throw UsageError("unknown op '" + args.op + "'; available: " + known);
  }
  const auto mu = args.mu_path.empty() ? membership::crisp() : load_mu(s, args.mu_path);
  const FieldContext real_ctx(ScalarKind::real, mu, s.tolerances());
  const FieldContext complex_ctx(ScalarKind::complex, mu, s.tolerances());
  auto need_a = [&] {
    if (!args.a) throw UsageError(args.op + " needs --a");
    return *args.a;
  };
  auto need_z = [&](const std::optional<std::string>& v, const char* flag) {
    if (!v) throw UsageError(args.op + " needs " + flag);
    return parse_complex(*v);
  };

  Json value;
  Json resolved = Json::array();
  std::string text;
  auto note_weight = [&](Complex x) {
    const double weight = mu_eval(complex_ctx, x);
    resolved.push_back(Json{{"at", io::scalar_to_json(x)}, {"mu", weight}});
    text += format("  mu(%s) = %.17g\n", show(x).c_str(), weight);
  };

  const std::string& op = args.op;
  if (op == "mu" || op == "scale" || op == "mu_abs") {
    const double a = need_a();
    const double v = op == "mu" ? mu_eval(real_ctx, a) : op == "scale" ? scale(real_ctx, a).scaled : mu_abs(real_ctx, a);
    value = v;
    text = format("%s(%.17g) = %.17g\n", op.c_str(), a, v);
    note_weight(a);
  } else if (op == "mu_compare") {
    const double a = need_a();
    if (!args.b) throw UsageError("mu_compare needs --b");
    const auto o = mu_compare(real_ctx, a, *args.b);
    value = to_string(o);
    text = format("mu_compare(%.17g, %.17g) = %s\n", a, *args.b, to_string(o));
    note_weight(a);
    note_weight(*args.b);
  } else if (op == "mu_sup" || op == "mu_inf") {
    if (args.set.empty()) throw UsageError(op + " needs --set");
    const auto e = op == "mu_sup" ? mu_sup(real_ctx, args.set) : mu_inf(real_ctx, args.set);
    value = Json{{"value", e.value}, {"witness", e.witness}};
    text = format("%s = %.17g (witness %.17g)\n", op.c_str(), e.value, e.witness);
    note_weight(e.witness);
  } else {
    const Complex z = need_z(args.z, "--z");
    Complex result;
    if (op == "mu_conj") result = mu_conj(complex_ctx, z);
    else if (op == "mu_abs_c") result = mu_abs_c(complex_ctx, z);
    else if (op == "mu_arg") result = mu_arg(complex_ctx, z);
    else if (op == "mu_exp") result = mu_exp(complex_ctx, z);
    else if (op == "mu_log") result = mu_log(complex_ctx, z);
    else result = mu_pow(complex_ctx, z, need_z(args.w, "--w"), args.branch);
    value = io::scalar_to_json(result);
    if (op == "mu_pow") {
      text = format("mu_pow(%s, %s; branch %d) = %s\n", show(z).c_str(), args.w->c_str(), args.branch, show(result).c_str());
      note_weight(parse_complex(*args.w));
    } else {
      text = format("%s(%s) = %s\n", op.c_str(), show(z).c_str(), show(result).c_str());
      note_weight(z);
    }
  }
  return s.emit(Json{{"op", op}, {"value", value}, {"resolved_memberships", resolved}}, text, 0);
}

// ---------------------------------------------------------------------------
// converge / demo

struct TraceRequest {
  std::string path;
  std::string expr = "self";
  std::optional<double> candidate;
};

inline std::string render_verdicts(const ExperimentReport& r) {
  std::string text;
  for (const auto& v : r.verdicts) {
    std::string cert = "none";
    if (v.tail_certificate) {
      cert = to_string(v.tail_certificate->kind);
      if (!v.tail_certificate->form.empty()) cert += " " + v.tail_certificate->form;
      cert += format(" from n=%lld", static_cast<long long>(v.tail_certificate->from));
    }
    text += format("%-8s candidate %-22.17g %-20s trivial-tail %.3f  certificate: %s\n", to_string(v.expr), v.candidate,
                   to_string(v.status), v.trivial_tail_fraction, cert.c_str());
    text += "         eps:";
    for (const auto& row : v.eps_table) {
      text += row.n ? format("  %g->%lld", row.eps, static_cast<long long>(*row.n)) : format("  %g->none", row.eps);
    }
    text += format("   (horizon %lld)\n", static_cast<long long>(v.horizon));
  }
  for (const auto& a : r.arithmetic) {
    text += format("limit arithmetic: x_n -> %.17g, y_n -> %.17g classically; %s at %.17g is %s\n", a.l, a.m,
                   to_string(a.expr), a.expected, to_string(a.verdict.status));
  }
  text += format("scaled x_n mu(x_n) over the horizon: max |.| = %.6g, probe %.6g, %s\n", r.bounds.max_abs_scaled,
                 r.bounds.probe,
                 r.bounds.first_exceeding_index
                     ? format("exceeded from n=%lld", static_cast<long long>(*r.bounds.first_exceeding_index)).c_str()
                     : "within probe");
  return text;
}

/// A refuted candidate or a refuted limit-arithmetic prediction counts as a failed check.
inline int experiment_status(const ExperimentReport& r) {
  for (const auto& v : r.verdicts)
    if (!v.supported()) return 1;
  for (const auto& a : r.arithmetic)
    if (!a.verdict.supported()) return 1;
  return 0;
}

inline void maybe_trace(const ExperimentSpec& e, const TraceRequest& t) {
  if (t.path.empty()) return;
  const Expr expr = io::parse_expr(t.expr, "--trace-expr");
  double candidate = 0.0;
  if (t.candidate) {
    candidate = *t.candidate;
  } else {
    for (auto it = e.targets.rbegin(); it != e.targets.rend(); ++it)
      if (it->expr == expr) candidate = it->candidate;
  }
  std::ofstream out(t.path);
  if (!out) throw UsageError("cannot write trace '" + t.path + "'");
  io::write_trace_csv(out, e, expr, candidate);
}

inline int cmd_converge(Session& s, const std::string& path, const TraceRequest& trace) {
  s.inputs.push_back(read_input(path));
  const auto e = io::load_experiment(s.inputs.back().text, s.tol);
  const auto report = run_experiment(e);
  maybe_trace(e, trace);
  return s.emit(io::to_json(report), "experiment " + e.name + "\n" + render_verdicts(report), experiment_status(report));
}

struct Narrative {
  std::string headline;
  std::string construction;
};

inline Narrative demo_narrative(const std::string& name) {
  if (name == "nonunique_limit") {
    return {"two distinct mu-limits",
            "x_n = ln n + 1 diverges in R. With mu(x_n) = mu(ln n + sqrt 2) = n/(n+1)^3 and mu = 0 elsewhere,\n"
            "both x_n - 0 and x_n - (1 - sqrt 2) have scaled deviations tending to 0."};
  }
  if (name == "unbounded_convergent" || name == "unbounded_convergent_literal") {
    return {"mu-convergent yet mu-unbounded",
            name == "unbounded_convergent"
                ? "x_n = e^n + 2 with mu(x_n) = 1 and mu(x_n - 1) = 1/(e^n+1)^2: the deviation from 1 is 1/(e^n+1)\n"
                  "while x_n mu(x_n) = e^n + 2 grows without bound. Without a positive membership floor,\n"
                  "convergence does not imply boundedness."
                : "Literal binding: the weight 1/(e^n+1)^2 sits on x_n + 1, so x_n - 1 keeps weight 0 and the\n"
                  "limit 1 is supported only trivially."};
  }
  if (name == "sum_failure") {
    return {"mu-limits do not add",
            "x_n = y_n = (1 + 1/n)^2 with mu(x_n - 1) = n^2/(2n+1)^3 and mu(2 x_n) = n^2/(2(n+1)^3):\n"
            "x_n and y_n mu-converge to 1 but x_n + y_n mu-converges to 0 (deviation 1/(n+1)); the\n"
            "candidate 2 is supported only because mu(2 x_n - 2) = 0."};
  }
  return {"mu-limits do not multiply",
          "x_n = (1 + 1/n)^2, y_n = (n+1)/(3n+1) with mu(x_n - 1) = n^2/(2n+1)^3, mu(y_n - 1/3) = 3(3n+1)/(2n^2)\n"
          "and mu(x_n y_n) = 1/n: x_n -> 1 and y_n -> 1/3 in the mu sense, yet x_n y_n mu-converges to 0.\n"
          "The scan starts at n = 5 where the y weight first fits in [0, 1]."};
}

inline int cmd_demo(Session& s, const std::string& name, const TraceRequest& trace) {
  auto e = demo_catalog(name);
  if (s.tol) e.context = FieldContext(ScalarKind::real, e.context.mu(), s.tolerances());
  const auto report = run_experiment(e);
  maybe_trace(e, trace);
  const auto story = demo_narrative(name);
  Json body = io::to_json(report);
  body["headline"] = story.headline;
  body["construction"] = story.construction;
  body["notes"] = e.notes;
  const std::string text = "== " + name + ": " + story.headline + " ==\n" + story.construction + "\n\n" + render_verdicts(report);
  return s.emit(body, text, experiment_status(report));
}

// ---------------------------------------------------------------------------
// identities

struct IdentityArgs {
  std::vector<std::string> ids;
  bool random = false;
  std::string mu_path;
  std::size_t trials = 100;
  bool literal = false;
};

inline constexpr std::uint64_t kDefaultSeed = 7;

inline int cmd_identities(Session& s, const IdentityArgs& args) {
  if (args.random && !args.mu_path.empty()) throw UsageError("--random and --mu are exclusive");
  SweepOptions opt;
  opt.ids = args.ids;
  opt.trials = args.trials;
  opt.include_literal = args.literal;
  opt.tol = s.tolerances();
  if (!s.seed) s.seed = kDefaultSeed;
  opt.seed = *s.seed;
  if (!args.mu_path.empty()) opt.fixed_mu = load_mu(s, args.mu_path);
  else if (!args.random) opt.fixed_mu = membership::crisp();
  const auto report = sweep_identities(opt);

  Json tallies = Json::array();
  std::string text = format("identity sweep: %zu trials per identity, seed %llu, membership %s\n", report.trials,
                            static_cast<unsigned long long>(report.seed),
                            args.random ? "random per trial" : (args.mu_path.empty() ? "crisp" : args.mu_path.c_str()));
  text += format("  %-11s %6s %6s %8s  %s\n", "id", "pass", "fail", "unmet", "max residual");
  for (const auto& t : report.tallies) {
    Json entry{{"id", t.id}, {"pass", t.pass}, {"fail", t.fail}, {"precondition_unmet", t.unmet}, {"max_residual", t.max_residual}};
    text += format("  %-11s %6zu %6zu %8zu  %.3g\n", t.id.c_str(), t.pass, t.fail, t.unmet, t.max_residual);
    if (t.first_failure) {
      const auto& f = *t.first_failure;
      Json ops = Json::array();
      std::string shown;
      for (const auto& z : f.operands) {
        ops.push_back(io::scalar_to_json(z));
        shown += (shown.empty() ? "" : ", ") + show(z);
      }
      entry["first_failure"] = Json{{"operands", ops}, {"lhs", io::scalar_to_json(f.lhs)}, {"rhs", io::scalar_to_json(f.rhs)},
                                    {"residual", f.residual}};
      text += format("      first failure at [%s]: lhs %s, rhs %s\n", shown.c_str(), show(f.lhs).c_str(), show(f.rhs).c_str());
    }
    tallies.push_back(entry);
  }
  text += report.all_passed() ? "all identities hold\n" : "some identities FAILED\n";
  const Json body{{"trials", report.trials}, {"random_mu", report.random_mu}, {"tallies", tallies}, {"all_passed", report.all_passed()}};
  return s.emit(body, text, report.all_passed() ? 0 : 1);
}

// ---------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Membership-weighted (fuzzy) real and complex field toolkit", "fuzzyfield"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.set_version_flag("--version", kVersion);
  Session s;
  s.out = &out;
  s.err = &err;
  double tol = 0.0;
  std::uint64_t seed = 0;
  app.add_flag("--json", s.json, "Emit a JSON envelope instead of tables");
  auto* tol_opt = app.add_option("--tol", tol, "Equality and identity tolerance")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "Seed for randomized sweeps");

  std::string mu_path;
  std::string samples_path;
  auto* axioms = app.add_subcommand("axioms", "Audit a membership function against the five closure axioms");
  axioms->add_option("mu", mu_path, "Membership JSON")->required();
  axioms->add_option("--samples", samples_path, "JSON array of sample points (default: grid -2..2 step 0.25)");
  axioms->add_flag("--grid", "Use the default grid (the default)");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate one operation");
  eval->add_option("op", eval_args.op, "Operation name")->required();
  eval->add_option("--mu", eval_args.mu_path, "Membership JSON (default crisp)");
  eval->add_option("--a", eval_args.a, "Real operand a");
  eval->add_option("--b", eval_args.b, "Real operand b");
  eval->add_option("--z", eval_args.z, "Complex operand re,im (base for mu_pow)");
  eval->add_option("--w", eval_args.w, "Complex exponent re,im for mu_pow");
  eval->add_option("--set", eval_args.set, "Finite real set")->delimiter(',');
  eval->add_option("--branch", eval_args.branch, "Branch index for mu_pow");

  std::string experiment_path;
  TraceRequest trace;
  double trace_candidate = 0.0;
  auto add_trace = [&](CLI::App* cmd) {
    cmd->add_option("--trace", trace.path, "Write a CSV trace (n, term, membership, scaled_deviation)");
    cmd->add_option("--trace-expr", trace.expr, "Expression to trace: self, partner, sum, product");
    return cmd->add_option("--trace-candidate", trace_candidate, "Candidate to trace (default: last for the expression)");
  };
  auto* converge = app.add_subcommand("converge", "Certify convergence candidates of an experiment");
  converge->add_option("experiment", experiment_path, "Experiment JSON")->required();
  auto* converge_cand = add_trace(converge);

  std::string demo_name;
  auto* demo = app.add_subcommand("demo", "Run a catalogued counterexample");
  demo->add_option("name", demo_name, "Demo name")->required();
  auto* demo_cand = add_trace(demo);

  IdentityArgs id_args;
  auto* identities = app.add_subcommand("identities", "Randomized sweep over the identity registries");
  identities->add_option("ids", id_args.ids, "Identity ids (default: all)");
  identities->add_flag("--random", id_args.random, "Draw a fresh random membership per trial");
  identities->add_option("--mu", id_args.mu_path, "Fixed membership JSON");
  identities->add_option("--trials", id_args.trials, "Trials per identity")->check(CLI::PositiveNumber);
  identities->add_flag("--literal", id_args.literal, "Also run the literal (uncorrected) forms");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  if (*tol_opt) s.tol = tol;
  if (*seed_opt) s.seed = seed;
  if (*converge_cand || *demo_cand) trace.candidate = trace_candidate;

  try {
    if (*axioms) {
      s.command = "axioms";
      return cmd_axioms(s, mu_path, samples_path);
    }
    if (*eval) {
      s.command = "eval";
      return cmd_eval(s, eval_args);
    }
    if (*converge) {
      s.command = "converge";
      return cmd_converge(s, experiment_path, trace);
    }
    if (*demo) {
      s.command = "demo";
      return cmd_demo(s, demo_name, trace);
    }
    s.command = "identities";
    return cmd_identities(s, id_args);
  } catch (const ParseError& e) {
    return s.fail(std::string("parse error at ") + e.what(), 2);
  } catch (const ValidationError& e) {
    return s.fail(std::string("invalid input: ") + e.what(), 2);
  } catch (const UsageError& e) {
    return s.fail(e.what(), 2);
  } catch (const Error& e) {
    return s.fail(e.what(), 1);
  }
}

}  // namespace fuzzyfield::cli
