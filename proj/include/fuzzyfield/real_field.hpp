#pragma once

/**
 * @file real_field.hpp
 * @brief Membership-weighted order, modulus and extrema on the reals.
 *
 * Every notion here goes through the scaled value x * mu(x). Since that map is
 * not injective, the induced order is a total preorder: distinct reals can be
 * mu-equivalent.
 */

#include <cmath>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyfield/errors.hpp"
#include "fuzzyfield/identity_report.hpp"
#include "fuzzyfield/membership.hpp"

namespace fuzzyfield {

/// Invariant: scaled == raw * weight, computed once.
struct ScaledValue {
  double raw = 0.0;
  double weight = 0.0;
  double scaled = 0.0;
};

namespace detail {
inline void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + ": non-finite operand");
}
}  // namespace detail

inline ScaledValue scale(const FieldContext& ctx, double x) {
  detail::require_finite(x, "scale");
  const double w = mu_eval(ctx, x);
  return ScaledValue{x, w, x * w};
}

enum class MuOrdering { less, equivalent, greater };

inline const char* to_string(MuOrdering o) {
  switch (o) {
    case MuOrdering::less: return "less";
    case MuOrdering::equivalent: return "mu-equivalent";
    case MuOrdering::greater: return "greater";
  }
  return "?";
}

/// Compares a*mu(a) with b*mu(b); differences within eq_tol are mu-equivalent.
inline MuOrdering mu_compare(const FieldContext& ctx, double a, double b) {
  const double sa = scale(ctx, a).scaled;
  const double sb = scale(ctx, b).scaled;
  if (std::abs(sa - sb) <= ctx.eq_tol()) return MuOrdering::equivalent;
  return sa < sb ? MuOrdering::less : MuOrdering::greater;
}

inline bool mu_le(const FieldContext& ctx, double a, double b) { return mu_compare(ctx, a, b) != MuOrdering::greater; }
inline bool mu_lt(const FieldContext& ctx, double a, double b) { return mu_compare(ctx, a, b) == MuOrdering::less; }
inline bool mu_ge(const FieldContext& ctx, double a, double b) { return mu_le(ctx, b, a); }
inline bool mu_gt(const FieldContext& ctx, double a, double b) { return mu_lt(ctx, b, a); }

/// |a| * mu(a)
inline double mu_abs(const FieldContext& ctx, double a) {
  detail::require_finite(a, "mu_abs");
  return std::abs(a) * mu_eval(ctx, a);
}

struct Extremum {
  double value = 0.0;    ///< scaled extreme
  double witness = 0.0;  ///< element attaining it
};

namespace detail {
template <class Better>
Extremum scaled_extreme(const FieldContext& ctx, std::span<const double> set, const char* what, Better better) {
  if (set.empty()) throw UsageError(std::string(what) + " of an empty set");
  Extremum best{scale(ctx, set.front()).scaled, set.front()};
  for (const double x : set.subspan(1)) {
    const double s = scale(ctx, x).scaled;
    if (better(s, best.value)) best = Extremum{s, x};
  }
  return best;
}
}  // namespace detail

inline Extremum mu_sup(const FieldContext& ctx, std::span<const double> set) {
  return detail::scaled_extreme(ctx, set, "mu_sup", [](double a, double b) { return a > b; });
}

inline Extremum mu_inf(const FieldContext& ctx, std::span<const double> set) {
  return detail::scaled_extreme(ctx, set, "mu_inf", [](double a, double b) { return a < b; });
}

struct BoundsReport {
  // Always true for finite sets; kept explicit for consumers of the record.
  bool mu_bounded_above = true;
  bool mu_bounded_below = true;
  std::optional<double> sup_mu;
  std::optional<double> inf_mu;
  double sup_witness = 0.0;
  double inf_witness = 0.0;
  double max_abs_scaled = 0.0;
  double max_abs_raw = 0.0;
  double probe = 0.0;
  bool within_probe = true;
  bool scaled_le_raw = true;  ///< max |x mu(x)| <= max |x|
  std::optional<Index> first_exceeding_index;  ///< sequences only
};

inline BoundsReport mu_bounded_report(const FieldContext& ctx, std::span<const double> set, double bound_probe) {
  if (set.empty()) throw UsageError("bounds report of an empty set");
  if (!(bound_probe > 0.0)) throw UsageError("bound probe must be positive");
  BoundsReport r;
  r.probe = bound_probe;
  const auto sup = mu_sup(ctx, set);
  const auto inf = mu_inf(ctx, set);
  r.sup_mu = sup.value;
  r.sup_witness = sup.witness;
  r.inf_mu = inf.value;
  r.inf_witness = inf.witness;
  for (const double x : set) {
    r.max_abs_scaled = std::max(r.max_abs_scaled, std::abs(scale(ctx, x).scaled));
    r.max_abs_raw = std::max(r.max_abs_raw, std::abs(x));
  }
  r.within_probe = r.max_abs_scaled <= bound_probe;
  r.scaled_le_raw = r.max_abs_scaled <= r.max_abs_raw;
  return r;
}

/// For each eps, looks for x in the set with M - eps < x mu(x) <= M. M defaults to mu_sup(set);
/// passing another value probes whether it also has the supremum characterization.
inline IdentityCheckReport check_sup_characterization(const FieldContext& ctx, std::span<const double> set,
                                                      std::span<const double> eps_schedule,
                                                      std::optional<double> candidate_sup = std::nullopt,
                                                      std::string id = "S1") {
  if (set.empty()) throw UsageError("sup characterization of an empty set");
  if (eps_schedule.empty()) throw UsageError("sup characterization needs at least one eps");
  for (const double e : eps_schedule)
    if (!(e > 0.0)) throw UsageError("eps must be positive");

  std::vector<Complex> operands(set.begin(), set.end());
  const auto sup = mu_sup(ctx, set);
  const double m = candidate_sup.value_or(sup.value);
  if (sup.value > m + ctx.eq_tol()) {
    return report::unmet(std::move(id), std::move(operands), "candidate is not a mu-upper bound of the set");
  }

  IdentityCheckReport r;
  r.id = std::move(id);
  r.operands = std::move(operands);
  r.lhs = sup.value;
  r.rhs = m;
  double worst = 0.0;
  for (const double eps : eps_schedule) {
    // The best witness is the largest scaled value not above M, i.e. the argmax.
    const double shortfall = (m - eps) - sup.value;
    std::ostringstream key;
    key << "witness[eps=" << eps << "]";
    if (shortfall < 0.0) {
      r.diagnostics.emplace_back(key.str(), sup.witness);
    } else {
      worst = std::max(worst, shortfall);
      r.notes.push_back(key.str() + ": none");
    }
  }
  r.residual = worst / std::max({1.0, std::abs(m), std::abs(sup.value)});
  r.verdict = r.residual > ctx.identity_tol() ? Verdict::fail : Verdict::pass;
  return r;
}

// ---------------------------------------------------------------------------
// Real identity registry

struct IdentityInfo {
  std::string id;
  std::size_t arity;  ///< minimum operand count
  bool variadic = false;
  std::string statement;
};

inline const std::vector<IdentityInfo>& real_identities() {
  static const std::vector<IdentityInfo> table{
      {"O1", 1, false, "a >= 0 => a >=_mu 0 and a <= 0 => a <=_mu 0"},
      {"O2", 1, false, "0 <=_mu a => -a <=_mu 0"},
      {"O3", 2, false, "0 <=_mu a, 0 <=_mu b => 0 <=_mu a + b"},
      {"O4", 2, false, "a <=_mu 0, b <=_mu 0 => a + b <=_mu 0"},
      {"O5", 2, false, "0 <=_mu a, 0 <=_mu b => 0 <=_mu ab"},
      {"O6", 2, false, "a <=_mu 0, b <=_mu 0 => 0 <=_mu ab"},
      {"O7", 2, false, "0 <=_mu a, b <=_mu 0 => ab <=_mu 0"},
      {"O8", 1, false, "a != 0 => 0 <=_mu a^2"},
      {"R1", 1, false, "|a|_mu = a mu(a) (a>0), 0 (a=0), -a mu(a) (a<0)"},
      {"R2", 1, false, "|-a|_mu = |a|_mu when mu(-a) = mu(a)"},
      {"R3", 2, false, "|ab|_mu/mu(ab) = (|a|_mu/mu(a)) (|b|_mu/mu(b))"},
      {"R4", 2, false, "|a+b|_mu/mu(a+b) <= |a|_mu/mu(a) + |b|_mu/mu(b)"},
      {"R5a", 2, false, "c > 0, |a|_mu < c => -c/mu(a) < a < c/mu(a)"},
      {"R5b", 2, false, "c > 0, |a| <_mu c => -c mu(c)/mu(a) < a < c mu(c)/mu(a)"},
      {"S1", 2, true, "M = sup_mu A iff for each eps > 0 some x in A has M - eps < x mu(x) <= M"},
  };
  return table;
}

namespace detail {

inline const IdentityInfo& lookup(const std::vector<IdentityInfo>& table, std::string_view id) {
  for (const auto& info : table)
    if (info.id == id) return info;
  throw UsageError("unknown identity '" + std::string(id) + "'");
}

inline bool positive_weights(const FieldContext& ctx, std::initializer_list<double> ws) {
  for (const double w : ws)
    if (!(w > ctx.min_mu())) return false;
  return true;
}

}  // namespace detail

/// Evaluates one registry entry (operands: a[, b] or a, c; S1 takes eps followed by the set).
inline IdentityCheckReport check_real_identity(const FieldContext& ctx, std::string_view id,
                                               std::span<const double> operands) {
  const auto& info = detail::lookup(real_identities(), id);
  if (operands.size() < info.arity || (!info.variadic && operands.size() != info.arity)) {
    throw UsageError("identity " + info.id + " expects " + std::to_string(info.arity) + " operand(s)");
  }
  for (const double v : operands) detail::require_finite(v, "identity operand");

  const std::vector<Complex> ops(operands.begin(), operands.end());
  const std::string name = info.id;
  auto mu = [&ctx](double x) { return mu_eval(ctx, x); };
  const double a = operands[0];
  const double b = operands.size() > 1 ? operands[1] : 0.0;
  const double zero = 0.0 * mu(0.0);
  const char* zero_weight = "a referenced membership is zero";

  if (name == "O1") {
    return a >= 0.0 ? report::at_most(ctx, name, ops, zero, a * mu(a)) : report::at_most(ctx, name, ops, a * mu(a), zero);
  }
  if (name == "O2") {
    if (!detail::positive_weights(ctx, {mu(a), mu(-a)})) return report::unmet(name, ops, zero_weight);
    if (!(zero <= a * mu(a))) return report::vacuous(name, ops);
    return report::at_most(ctx, name, ops, -a * mu(-a), zero);
  }
  if (name == "O3" || name == "O4" || name == "O5" || name == "O6" || name == "O7") {
    const bool sum = name == "O3" || name == "O4";
    const double combined = sum ? a + b : a * b;
    if (!detail::positive_weights(ctx, {mu(a), mu(b), mu(combined)})) return report::unmet(name, ops, zero_weight);
    const double sa = a * mu(a);
    const double sb = b * mu(b);
    const double sc = combined * mu(combined);
    if (name == "O3") return sa >= zero && sb >= zero ? report::at_most(ctx, name, ops, zero, sc) : report::vacuous(name, ops);
    if (name == "O4") return sa <= zero && sb <= zero ? report::at_most(ctx, name, ops, sc, zero) : report::vacuous(name, ops);
    if (name == "O5") return sa >= zero && sb >= zero ? report::at_most(ctx, name, ops, zero, sc) : report::vacuous(name, ops);
    if (name == "O6") return sa <= zero && sb <= zero ? report::at_most(ctx, name, ops, zero, sc) : report::vacuous(name, ops);
    return sa >= zero && sb <= zero ? report::at_most(ctx, name, ops, sc, zero) : report::vacuous(name, ops);
  }
  if (name == "O8") {
    if (a == 0.0) return report::vacuous(name, ops);
    return report::at_most(ctx, name, ops, zero, a * a * mu(a * a));
  }
  if (name == "R1") {
    const double piecewise = a > 0.0 ? a * mu(a) : (a == 0.0 ? 0.0 : -a * mu(a));
    return report::equality(ctx, name, ops, mu_abs(ctx, a), piecewise);
  }
  if (name == "R2") {
    if (std::abs(mu(-a) - mu(a)) > ctx.eq_tol()) return report::unmet(name, ops, "mu(-a) differs from mu(a)");
    return report::equality(ctx, name, ops, mu_abs(ctx, -a), mu_abs(ctx, a));
  }
  if (name == "R3") {
    if (!detail::positive_weights(ctx, {mu(a), mu(b), mu(a * b)})) return report::unmet(name, ops, zero_weight);
    return report::equality(ctx, name, ops, mu_abs(ctx, a * b) / mu(a * b),
                            (mu_abs(ctx, a) / mu(a)) * (mu_abs(ctx, b) / mu(b)));
  }
  if (name == "R4") {
    if (!detail::positive_weights(ctx, {mu(a), mu(b), mu(a + b)})) return report::unmet(name, ops, zero_weight);
    return report::at_most(ctx, name, ops, mu_abs(ctx, a + b) / mu(a + b), mu_abs(ctx, a) / mu(a) + mu_abs(ctx, b) / mu(b));
  }
  if (name == "R5a" || name == "R5b") {
    const double c = b;
    if (!(c > 0.0)) return report::unmet(name, ops, "c must be positive");
    if (!detail::positive_weights(ctx, {mu(a)})) return report::unmet(name, ops, zero_weight);
    if (name == "R5a") {
      if (!(mu_abs(ctx, a) < c)) return report::vacuous(name, ops);
      return report::at_most(ctx, name, ops, std::abs(a), c / mu(a));
    }
    if (std::abs(mu(-a) - mu(a)) > ctx.eq_tol()) return report::unmet(name, ops, "mu(-a) differs from mu(a)");
    const double abs_a = std::abs(a);
    if (!(abs_a * mu(abs_a) < c * mu(c))) return report::vacuous(name, ops);
    return report::at_most(ctx, name, ops, abs_a, c * mu(c) / mu(a));
  }
  // S1
  if (!(a > 0.0)) return report::unmet(name, ops, "eps must be positive");
  const double eps[] = {a};
  auto r = check_sup_characterization(ctx, operands.subspan(1), eps, std::nullopt, name);
  r.operands = ops;
  return r;
}

}  // namespace fuzzyfield
