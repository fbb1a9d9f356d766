#pragma once

/**
 * @file sequences.hpp
 * @brief Closed-form sequences, membership-weighted convergence and boundedness.
 *
 * A sequence converges to a candidate l when |v_n - l| * mu(v_n - l) drops below
 * every eps from some index on. Numerically "from some index on" is read up to
 * a finite horizon: N(eps) is the smallest k such that the scaled deviation is
 * below eps for every n in [k, horizon]. Verdicts are therefore horizon-relative;
 * a tail certificate records when the deviation is also monotone over the
 * scanned tail or follows a declared analytic envelope.
 *
 * Memberships of the tracked expressions (v_n - l for the primary sequence, its
 * partner, their sum or their product) come from an explicit MuAssignment when
 * one is declared for that expression and offset, and from the context's
 * membership function otherwise.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fuzzyfield/errors.hpp"
#include "fuzzyfield/forms.hpp"
#include "fuzzyfield/identity_report.hpp"
#include "fuzzyfield/membership.hpp"
#include "fuzzyfield/real_field.hpp"

namespace fuzzyfield {

struct ConstantValue {
  double value = 0.0;
};

/// Explicit terms; values[i] is the term at n_min + i.
struct TableValues {
  std::vector<double> values;
};

using SequenceForm = std::variant<LogPlus, ExpPlus, SquareRatio, Moebius, ConstantValue, TableValues>;

inline std::string form_id(const SequenceForm& form) {
  return std::visit(detail::overloaded{
                        [](const LogPlus&) { return std::string("log_plus"); },
                        [](const ExpPlus&) { return std::string("exp_plus"); },
                        [](const SquareRatio&) { return std::string("sq_ratio"); },
                        [](const Moebius&) { return std::string("moebius"); },
                        [](const ConstantValue&) { return std::string("constant"); },
                        [](const TableValues&) { return std::string("custom_table"); },
                    },
                    form);
}

struct SequenceSpec {
  SequenceForm form;
  Index n_min = 1;
  Index n_max = 100'000;

  /// Largest admissible index: 700 for exp_plus, the table end for tables.
  Index cap() const {
    if (std::holds_alternative<ExpPlus>(form)) return kExpIndexCap;
    if (const auto* t = std::get_if<TableValues>(&form)) return n_min + static_cast<Index>(t->values.size()) - 1;
    return kNoIndexCap;
  }

  void validate() const {
    if (n_min < 1) throw UsageError("sequence n_min must be a positive integer");
    if (n_min > n_max) throw UsageError("sequence n_min exceeds n_max");
    if (n_max > cap()) {
      throw UsageError(form_id(form) + " sequence: n_max " + std::to_string(n_max) + " exceeds the index cap " +
                       std::to_string(cap()));
    }
  }
};

inline double term_at(const SequenceSpec& seq, Index n) {
  if (n < seq.n_min || n > seq.n_max) {
    throw UsageError("index " + std::to_string(n) + " outside [" + std::to_string(seq.n_min) + ", " +
                     std::to_string(seq.n_max) + "]");
  }
  const double v = std::visit(detail::overloaded{
                                  [](const ConstantValue& c) { return c.value; },
                                  [n, &seq](const TableValues& t) { return t.values[static_cast<std::size_t>(n - seq.n_min)]; },
                                  [n](const auto& f) { return evaluate_family(f, n); },
                              },
                              seq.form);
  if (!std::isfinite(v)) throw DomainError("sequence term at n=" + std::to_string(n) + " is not finite");
  return v;
}

// ---------------------------------------------------------------------------
// Tracked expressions and membership assignment

enum class Expr { self, partner, sum, product };

inline const char* to_string(Expr e) {
  switch (e) {
    case Expr::self: return "self";
    case Expr::partner: return "partner";
    case Expr::sum: return "sum";
    case Expr::product: return "product";
  }
  return "?";
}

/// Weight form for the expression `expr` minus `offset` (offset 0 is the expression itself).
struct MuAssignmentEntry {
  Expr expr = Expr::self;
  double offset = 0.0;
  MuForm form;
};

struct MuAssignment {
  std::vector<MuAssignmentEntry> entries;

  const MuAssignmentEntry* find(Expr expr, double candidate, double tol) const {
    for (const auto& e : entries)
      if (e.expr == expr && std::abs(e.offset - candidate) <= tol) return &e;
    return nullptr;
  }
};

/// A (tracked expression, candidate limit) pair to certify.
struct Target {
  Expr expr = Expr::self;
  double candidate = 0.0;
  /// Declared analytic envelope of the scaled deviation, e.g. "1/(n+1)".
  std::optional<std::string> envelope;
};

inline std::vector<double> default_eps_schedule() { return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}; }

struct ExperimentSpec {
  std::string name = "experiment";
  SequenceSpec primary;
  std::optional<SequenceSpec> partner;
  MuAssignment assignment;
  FieldContext context;
  std::vector<Target> targets;
  std::vector<double> eps_schedule = default_eps_schedule();
  Index horizon = 100'000;
  double bound_probe = 1e6;
  std::vector<std::string> notes;

  Index start() const { return partner ? std::max(primary.n_min, partner->n_min) : primary.n_min; }

  /// Throws UsageError on structural problems and ValidationError on out-of-range weights.
  void validate() const {
    primary.validate();
    if (partner) partner->validate();
    if (eps_schedule.empty()) throw UsageError("eps schedule is empty");
    for (const double e : eps_schedule)
      if (!(e > 0.0)) throw UsageError("eps values must be positive");
    if (horizon < start()) throw UsageError("horizon precedes the first index");
    auto check_cap = [this](const SequenceSpec& s) {
      if (horizon > s.n_max) {
        throw UsageError("horizon " + std::to_string(horizon) + " exceeds the " + form_id(s.form) +
                         " sequence's n_max " + std::to_string(s.n_max));
      }
    };
    check_cap(primary);
    if (partner) check_cap(*partner);
    auto needs_partner = [](Expr e) { return e != Expr::self; };
    for (const auto& t : targets)
      if (needs_partner(t.expr) && !partner) throw UsageError(std::string("target '") + to_string(t.expr) + "' needs a partner sequence");
    for (const auto& e : assignment.entries) {
      if (needs_partner(e.expr) && !partner) throw UsageError("membership assignment references a missing partner");
      for (Index n = start(); n <= horizon; ++n) {
        const double w = evaluate(e.form, n);
        if (!(w >= 0.0 && w <= 1.0)) {
          throw ValidationError(std::string("assignment for ") + to_string(e.expr) + ": weight " + std::to_string(w) +
                                " at n=" + std::to_string(n) + " outside [0,1]");
        }
      }
    }
  }
};

inline double expression_value(const ExperimentSpec& exp, Expr expr, Index n) {
  switch (expr) {
    case Expr::self: return term_at(exp.primary, n);
    case Expr::partner: return term_at(*exp.partner, n);
    case Expr::sum: return term_at(exp.primary, n) + term_at(*exp.partner, n);
    case Expr::product: return term_at(exp.primary, n) * term_at(*exp.partner, n);
  }
  return 0.0;
}

/// Membership of (expression at n) - candidate.
inline double resolved_weight(const ExperimentSpec& exp, Expr expr, double candidate, Index n, double value) {
  if (const auto* entry = exp.assignment.find(expr, candidate, exp.context.eq_tol())) return evaluate(entry->form, n);
  return mu_eval(exp.context, value - candidate);
}

/// |v_n - candidate| * mu(v_n - candidate)
inline double scaled_deviation(const ExperimentSpec& exp, Expr expr, double candidate, Index n) {
  if (n < exp.start() || n > exp.horizon) throw UsageError("index " + std::to_string(n) + " outside the experiment range");
  const double v = expression_value(exp, expr, n);
  return std::abs(v - candidate) * resolved_weight(exp, expr, candidate, n, v);
}

/// Per-index values for one (expression, candidate) pair over [start, horizon].
struct DeviationTrace {
  Index start = 1;
  std::vector<double> term;
  std::vector<double> weight;
  std::vector<double> deviation;

  Index index_of(std::size_t i) const { return start + static_cast<Index>(i); }
  std::size_t size() const { return deviation.size(); }
};

inline DeviationTrace trace_deviation(const ExperimentSpec& exp, Expr expr, double candidate) {
  DeviationTrace t;
  t.start = exp.start();
  const auto count = static_cast<std::size_t>(exp.horizon - t.start + 1);
  t.term.resize(count);
  t.weight.resize(count);
  t.deviation.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Index n = t.index_of(i);
    const double v = expression_value(exp, expr, n);
    const double w = resolved_weight(exp, expr, candidate, n, v);
    t.term[i] = v;
    t.weight[i] = w;
    t.deviation[i] = std::abs(v - candidate) * w;
  }
  return t;
}

/// Smallest k with deviation < eps on all of [k, horizon]; none if the last term already fails.
inline std::optional<Index> min_index_for_epsilon(const DeviationTrace& trace, double eps) {
  std::optional<Index> k;
  for (std::size_t i = trace.size(); i-- > 0;) {
    if (!(trace.deviation[i] < eps)) break;
    k = trace.index_of(i);
  }
  return k;
}

inline std::optional<Index> min_index_for_epsilon(const ExperimentSpec& exp, Expr expr, double candidate, double eps) {
  if (!(eps > 0.0)) throw UsageError("eps must be positive");
  return min_index_for_epsilon(trace_deviation(exp, expr, candidate), eps);
}

// ---------------------------------------------------------------------------
// Convergence verdicts

enum class ConvergenceStatus { supported, supported_trivially, refuted_at_horizon };

inline const char* to_string(ConvergenceStatus s) {
  switch (s) {
    case ConvergenceStatus::supported: return "supported";
    case ConvergenceStatus::supported_trivially: return "supported-trivially";
    case ConvergenceStatus::refuted_at_horizon: return "refuted-at-horizon";
  }
  return "?";
}

struct EpsRow {
  double eps = 0.0;
  std::optional<Index> n;  ///< none: not within horizon
};

struct TailCertificate {
  enum class Kind { monotone_envelope, analytic_bound };
  Kind kind = Kind::monotone_envelope;
  std::string form;  ///< envelope description for analytic bounds
  Index from = 1;
};

inline const char* to_string(TailCertificate::Kind k) {
  return k == TailCertificate::Kind::monotone_envelope ? "monotone-envelope" : "analytic-bound";
}

struct ConvergenceVerdict {
  Expr expr = Expr::self;
  double candidate = 0.0;
  std::vector<EpsRow> eps_table;
  Index start = 1;
  Index horizon = 1;
  /// Fraction of tail indices whose membership is at most min_mu. The tail starts at N of the
  /// loosest eps (or at the first index when that eps is not reached).
  double trivial_tail_fraction = 0.0;
  Index tail_start = 1;
  std::optional<TailCertificate> tail_certificate;
  ConvergenceStatus status = ConvergenceStatus::refuted_at_horizon;

  bool supported() const { return status != ConvergenceStatus::refuted_at_horizon; }
  bool nontrivially_supported() const { return status == ConvergenceStatus::supported; }

  std::optional<Index> n_for(double eps) const {
    for (const auto& row : eps_table)
      if (row.eps == eps) return row.n;
    return std::nullopt;
  }
};

namespace detail {

inline bool nonincreasing_from(const std::vector<double>& dev, std::size_t from) {
  for (std::size_t i = from + 1; i < dev.size(); ++i)
    if (dev[i] > dev[i - 1] * (1.0 + 1e-12)) return false;
  return true;
}

}  // namespace detail

inline ConvergenceVerdict verdict_from_trace(const ExperimentSpec& exp, const Target& target,
                                             const DeviationTrace& trace) {
  ConvergenceVerdict v;
  v.expr = target.expr;
  v.candidate = target.candidate;
  v.start = trace.start;
  v.horizon = exp.horizon;

  bool all_found = true;
  for (const double eps : exp.eps_schedule) {
    v.eps_table.push_back(EpsRow{eps, min_index_for_epsilon(trace, eps)});
    all_found = all_found && v.eps_table.back().n.has_value();
  }

  const double loosest = *std::max_element(exp.eps_schedule.begin(), exp.eps_schedule.end());
  v.tail_start = min_index_for_epsilon(trace, loosest).value_or(trace.start);
  const auto from = static_cast<std::size_t>(v.tail_start - trace.start);
  std::size_t trivial = 0;
  for (std::size_t i = from; i < trace.size(); ++i)
    if (trace.weight[i] <= exp.context.min_mu()) ++trivial;
  const std::size_t tail_len = trace.size() - from;
  v.trivial_tail_fraction = tail_len == 0 ? 0.0 : static_cast<double>(trivial) / static_cast<double>(tail_len);

  if (all_found) {
    if (detail::nonincreasing_from(trace.deviation, from)) {
      v.tail_certificate = TailCertificate{TailCertificate::Kind::monotone_envelope, "", v.tail_start};
    } else if (target.envelope) {
      v.tail_certificate = TailCertificate{TailCertificate::Kind::analytic_bound, *target.envelope, v.tail_start};
    }
    v.status = trivial == tail_len ? ConvergenceStatus::supported_trivially : ConvergenceStatus::supported;
  }
  return v;
}

inline ConvergenceVerdict mu_converges(const ExperimentSpec& exp, const Target& target) {
  if (exp.eps_schedule.empty()) throw UsageError("eps schedule is empty");
  return verdict_from_trace(exp, target, trace_deviation(exp, target.expr, target.candidate));
}

inline ConvergenceVerdict mu_converges(const ExperimentSpec& exp, Expr expr, double candidate) {
  return mu_converges(exp, Target{expr, candidate, std::nullopt});
}

/// Classical convergence: the same scan with membership identically 1.
inline ConvergenceVerdict classical_converges(const SequenceSpec& seq, double candidate,
                                              std::vector<double> eps_schedule, Index horizon,
                                              const Tolerances& tol = {}) {
  ExperimentSpec exp;
  exp.name = "classical";
  exp.primary = seq;
  exp.context = FieldContext(ScalarKind::real, membership::crisp(), tol);
  exp.eps_schedule = std::move(eps_schedule);
  exp.horizon = horizon;
  exp.validate();
  return mu_converges(exp, Expr::self, candidate);
}

// ---------------------------------------------------------------------------
// Boundedness and monotonicity

/// Scaled values v_n * mu(v_n) of one tracked expression over [start, horizon].
inline std::vector<double> scaled_terms(const ExperimentSpec& exp, Expr expr) {
  const auto t = trace_deviation(exp, expr, 0.0);
  std::vector<double> s(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) s[i] = t.term[i] * t.weight[i];
  return s;
}

inline BoundsReport seq_bounded_report(const ExperimentSpec& exp, Expr expr = Expr::self) {
  const auto t = trace_deviation(exp, expr, 0.0);
  BoundsReport r;
  r.probe = exp.bound_probe;
  r.sup_mu = -std::numeric_limits<double>::infinity();
  r.inf_mu = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double s = t.term[i] * t.weight[i];
    const auto n = static_cast<double>(t.index_of(i));
    if (s > *r.sup_mu) { r.sup_mu = s; r.sup_witness = n; }
    if (s < *r.inf_mu) { r.inf_mu = s; r.inf_witness = n; }
    r.max_abs_scaled = std::max(r.max_abs_scaled, std::abs(s));
    r.max_abs_raw = std::max(r.max_abs_raw, std::abs(t.term[i]));
    if (!r.first_exceeding_index && std::abs(s) > exp.bound_probe) r.first_exceeding_index = t.index_of(i);
  }
  r.within_probe = r.max_abs_scaled <= exp.bound_probe;
  r.scaled_le_raw = r.max_abs_scaled <= r.max_abs_raw;
  return r;
}

/// Checks that v_n mu(v_n) is nondecreasing over the horizon, bounded by the probe, and that its
/// final term sits at the horizon supremum with a nonincreasing gap. Unbounded but increasing
/// input is reported precondition-unmet.
inline IdentityCheckReport check_monotone(const ExperimentSpec& exp, Expr expr = Expr::self) {
  if (exp.horizon < exp.start() + 1) throw UsageError("monotonicity needs at least two terms");
  const auto t = trace_deviation(exp, expr, 0.0);
  const double slack = exp.context.eq_tol();
  std::vector<double> s(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) s[i] = t.term[i] * t.weight[i];

  IdentityCheckReport r;
  r.id = "monotone";
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i + 1] < s[i] - slack) {
      r.verdict = Verdict::fail;
      r.lhs = s[i];
      r.rhs = s[i + 1];
      r.residual = relative_residual(s[i], s[i + 1]);
      r.diagnostics.emplace_back("first_violation", static_cast<double>(t.index_of(i)));
      r.notes.push_back("not mu-increasing: scaled term drops after n=" + std::to_string(t.index_of(i)));
      return r;
    }
  }
  const double sup = *std::max_element(s.begin(), s.end());
  const double max_abs = std::max(std::abs(sup), std::abs(*std::min_element(s.begin(), s.end())));
  r.lhs = s.back();
  r.rhs = sup;
  r.diagnostics.emplace_back("horizon_sup", sup);
  if (max_abs > exp.bound_probe) {
    r.verdict = Verdict::precondition_unmet;
    r.notes.push_back("mu-increasing but not mu-bounded within the probe");
    return r;
  }
  bool gap_ok = true;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (sup - s[i] > sup - s[i - 1] + slack) gap_ok = false;
  const double gap = std::abs(s.back() - sup);
  r.residual = gap / (1.0 + std::abs(sup));
  r.diagnostics.emplace_back("final_gap", gap);
  r.verdict = gap <= slack * (1.0 + std::abs(sup)) && gap_ok ? Verdict::pass : Verdict::fail;
  if (!gap_ok) r.notes.push_back("gap to the horizon supremum increases somewhere");
  return r;
}

/// The two-sided bound a(l a - 1) < v_n mu(v_n) < (l + 1)/a over the tail where the scaled
/// deviation from l is below 1, for a membership floor a > 0.
inline IdentityCheckReport check_floor_bound(const ExperimentSpec& exp, Expr expr, double limit, double floor) {
  if (!(floor > 0.0 && floor <= 1.0)) throw UsageError("membership floor must lie in (0, 1]");
  std::vector<Complex> ops{limit, floor};
  const auto dev = trace_deviation(exp, expr, limit);
  const auto own = trace_deviation(exp, expr, 0.0);
  for (std::size_t i = 0; i < dev.size(); ++i) {
    if (dev.weight[i] < floor - exp.context.eq_tol() || own.weight[i] < floor - exp.context.eq_tol()) {
      return report::unmet("floor_bound", ops, "a resolved membership lies below the floor");
    }
  }
  const auto k = min_index_for_epsilon(dev, 1.0);
  if (!k) return report::unmet("floor_bound", ops, "scaled deviation never stays below 1 within the horizon");

  const double lower = floor * (limit * floor - 1.0);
  const double upper = (limit + 1.0) / floor;
  IdentityCheckReport r;
  r.id = "floor_bound";
  r.operands = ops;
  r.lhs = lower;
  r.rhs = upper;
  r.diagnostics.emplace_back("tail_start", static_cast<double>(*k));
  double worst = -std::numeric_limits<double>::infinity();
  for (auto i = static_cast<std::size_t>(*k - dev.start); i < own.size(); ++i) {
    const double s = own.term[i] * own.weight[i];
    const double excess = std::max(lower - s, s - upper);
    if (excess >= 0.0 && !r.diagnostic("first_violation")) {
      r.diagnostics.emplace_back("first_violation", static_cast<double>(own.index_of(i)));
    }
    worst = std::max(worst, excess);
  }
  r.residual = std::max(0.0, worst) / std::max({1.0, std::abs(lower), std::abs(upper)});
  r.verdict = worst < 0.0 ? Verdict::pass : Verdict::fail;
  if (r.verdict == Verdict::fail && r.residual <= exp.context.identity_tol()) r.residual = std::max(r.residual, 1.0);
  return r;
}

// ---------------------------------------------------------------------------
// Whole experiments

struct ArithmeticCheck {
  Expr expr = Expr::sum;
  double l = 0.0;
  double m = 0.0;
  double expected = 0.0;  ///< l + m or l m
  ConvergenceVerdict verdict;
};

struct ExperimentReport {
  std::string name;
  std::vector<ConvergenceVerdict> verdicts;  ///< one per target, same order
  std::optional<ConvergenceVerdict> classical_primary;
  std::optional<ConvergenceVerdict> classical_partner;
  /// Present when both inputs converge classically, so sum and product limits are predicted.
  std::vector<ArithmeticCheck> arithmetic;
  /// Supported candidates of sum/product targets, reported without asserting arithmetic.
  std::vector<std::pair<Expr, double>> observed_limits;
  BoundsReport bounds;
};

namespace detail {

inline std::optional<ConvergenceVerdict> classical_limit(const ExperimentSpec& exp, const SequenceSpec& seq, Expr expr) {
  for (const auto& t : exp.targets) {
    if (t.expr != expr) continue;
    auto v = classical_converges(seq, t.candidate, exp.eps_schedule, exp.horizon, exp.context.tolerances());
    if (v.supported()) return v;
  }
  return std::nullopt;
}

}  // namespace detail

inline ExperimentReport run_experiment(const ExperimentSpec& exp) {
  exp.validate();
  ExperimentReport report;
  report.name = exp.name;
  for (const auto& t : exp.targets) report.verdicts.push_back(mu_converges(exp, t));

  report.classical_primary = detail::classical_limit(exp, exp.primary, Expr::self);
  if (exp.partner) report.classical_partner = detail::classical_limit(exp, *exp.partner, Expr::partner);
  if (report.classical_primary && report.classical_partner) {
    const double l = report.classical_primary->candidate;
    const double m = report.classical_partner->candidate;
    for (const Expr e : {Expr::sum, Expr::product}) {
      const double expected = e == Expr::sum ? l + m : l * m;
      report.arithmetic.push_back(ArithmeticCheck{e, l, m, expected, mu_converges(exp, e, expected)});
    }
  }
  for (const auto& v : report.verdicts)
    if ((v.expr == Expr::sum || v.expr == Expr::product) && v.supported()) report.observed_limits.emplace_back(v.expr, v.candidate);
  report.bounds = seq_bounded_report(exp, Expr::self);
  return report;
}

}  // namespace fuzzyfield
