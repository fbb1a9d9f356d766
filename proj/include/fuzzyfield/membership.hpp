#pragma once

/**
 * @file membership.hpp
 * @brief Rule-based membership functions and the field context that carries them.
 *
 * A membership function maps a real or complex scalar to a weight in [0,1].
 * It is an ordered list of rules followed by a default weight; the first rule
 * whose matcher accepts the scalar decides the weight. Matchers compare within
 * an absolute tolerance because exact real equality is not computable.
 *
 * Family matchers accept the members v(n) of a closed-form family for n in a
 * declared index range and may weight each member through a form w(n). All
 * weights are validated eagerly: constructing a MembershipFunction scans every
 * declared index range and rejects any weight outside [0,1].
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fuzzyfield/errors.hpp"
#include "fuzzyfield/forms.hpp"

namespace fuzzyfield {

inline constexpr double kDefaultMatchTol = 1e-9;

struct PointMatcher {
  Complex value;
  double tol = kDefaultMatchTol;
};

struct SetMatcher {
  std::vector<Complex> values;
  double tol = kDefaultMatchTol;
};

/// Accepts v(n) for n in [n_min, n_max]. The tolerance scales with max(1, |v(n)|).
struct FamilyMatcher {
  FamilyForm form;
  Index n_min = 1;
  Index n_max = 1;
  double tol = kDefaultMatchTol;
};

using Matcher = std::variant<PointMatcher, SetMatcher, FamilyMatcher>;

/// Either a constant weight or a form of the family index (family matchers only).
using RuleWeight = std::variant<double, MuForm>;

struct MuRule {
  Matcher matcher;
  RuleWeight weight;
};

/// Outcome of resolving a scalar against a membership function.
struct MuResolution {
  double weight = 0.0;
  std::optional<std::size_t> rule;  ///< index of the matching rule, none for the default
  std::optional<Index> n;           ///< matched family index
};

namespace detail {

inline bool within(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

inline std::optional<Index> match_family(const FamilyMatcher& m, Complex v) {
  if (std::abs(v.imag()) > m.tol) return std::nullopt;
  const auto est = index_estimate(m.form, v.real());
  if (!est) return std::nullopt;
  const double lo = static_cast<double>(m.n_min) - 1.0;
  const double hi = static_cast<double>(m.n_max) + 1.0;
  const double centre = std::clamp(std::round(*est), lo, hi);
  if (!std::isfinite(centre)) return std::nullopt;
  std::optional<Index> best;
  double best_gap = 0.0;
  const auto c = static_cast<Index>(centre);
  for (Index n = c - 1; n <= c + 1; ++n) {
    if (n < m.n_min || n > m.n_max) continue;
    const double member = evaluate(m.form, n);
    const double gap = std::abs(member - v.real());
    if (gap <= m.tol * std::max(1.0, std::abs(member)) && (!best || gap < best_gap)) {
      best = n;
      best_gap = gap;
    }
  }
  return best;
}

inline std::string describe_rule(std::size_t i) { return "rule " + std::to_string(i); }

}  // namespace detail

class MembershipFunction {
 public:
  /// Validates every rule; throws ValidationError naming the rule (and index n) on failure.
  explicit MembershipFunction(std::vector<MuRule> rules = {}, double default_weight = 1.0)
      : rules_(std::move(rules)), default_(default_weight) {
    validate();
  }

  MuResolution resolve(Complex v) const {
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      const auto& rule = rules_[i];
      const auto n = std::visit(
          detail::overloaded{
              [v](const PointMatcher& m) -> std::optional<Index> {
                return detail::within(v, m.value, m.tol) ? std::optional<Index>{0} : std::nullopt;
              },
              [v](const SetMatcher& m) -> std::optional<Index> {
                for (const auto& s : m.values)
                  if (detail::within(v, s, m.tol)) return Index{0};
                return std::nullopt;
              },
              [v](const FamilyMatcher& m) { return detail::match_family(m, v); },
          },
          rule.matcher);
      if (!n) continue;
      MuResolution res;
      res.rule = i;
      if (const auto* c = std::get_if<double>(&rule.weight)) {
        res.weight = *c;
      } else {
        res.weight = evaluate(std::get<MuForm>(rule.weight), *n);
      }
      if (std::holds_alternative<FamilyMatcher>(rule.matcher)) res.n = *n;
      return res;
    }
    return MuResolution{default_, std::nullopt, std::nullopt};
  }

  double operator()(Complex v) const { return resolve(v).weight; }

  const std::vector<MuRule>& rules() const noexcept { return rules_; }
  double default_weight() const noexcept { return default_; }

 private:
  static constexpr Index kMaxScan = 50'000'000;

  static bool unit(double w) { return w >= 0.0 && w <= 1.0; }

  void validate() const {
    if (!unit(default_)) {
      std::ostringstream os;
      os << "default weight " << default_ << " outside [0,1]";
      throw ValidationError(os.str());
    }
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      const auto& rule = rules_[i];
      const auto where = detail::describe_rule(i);
      const double tol = std::visit([](const auto& m) { return m.tol; }, rule.matcher);
      if (!(tol >= 0.0)) throw ValidationError(where + ": negative matcher tolerance");
      const auto* family = std::get_if<FamilyMatcher>(&rule.matcher);
      if (family) {
        if (family->n_min < 1) throw ValidationError(where + ": n_min must be a positive integer");
        if (family->n_min > family->n_max) throw ValidationError(where + ": n_min > n_max");
        if (family->n_max > index_cap(family->form)) {
          throw ValidationError(where + ": n_max " + std::to_string(family->n_max) + " exceeds the " +
                                form_id(family->form) + " index cap " + std::to_string(index_cap(family->form)));
        }
      }
      if (const auto* c = std::get_if<double>(&rule.weight)) {
        if (!unit(*c)) {
          std::ostringstream os;
          os << where << ": weight " << *c << " outside [0,1]";
          throw ValidationError(os.str());
        }
        continue;
      }
      if (!family) throw ValidationError(where + ": weight forms of n require a family matcher");
      if (family->n_max - family->n_min > kMaxScan) {
        throw ValidationError(where + ": index range too large to validate");
      }
      const auto& form = std::get<MuForm>(rule.weight);
      for (Index n = family->n_min; n <= family->n_max; ++n) {
        const double w = evaluate(form, n);
        if (!unit(w)) {
          std::ostringstream os;
          os << where << ": weight " << w << " at n=" << n << " outside [0,1]";
          throw ValidationError(os.str());
        }
      }
    }
  }

  std::vector<MuRule> rules_;
  double default_;
};

// ---------------------------------------------------------------------------
// Field context

enum class ScalarKind { real, complex };

struct Tolerances {
  double eq = 1e-9;        ///< absolute slack for order comparisons and rule matching
  double identity = 1e-9;  ///< relative residual accepted by identity checks
  double min_mu = 1e-12;   ///< weights at or below this count as zero
};

class FieldContext {
 public:
  explicit FieldContext(ScalarKind kind = ScalarKind::real, MembershipFunction mu = MembershipFunction{},
                        Tolerances tol = {})
      : kind_(kind), mu_(std::move(mu)), tol_(tol) {
    if (!(tol_.eq > 0.0) || !(tol_.identity > 0.0) || !(tol_.min_mu > 0.0)) {
      throw ValidationError("field context tolerances must be strictly positive");
    }
    if (!(tol_.min_mu < 1.0)) throw ValidationError("min_mu must be below 1");
  }

  ScalarKind kind() const noexcept { return kind_; }
  const MembershipFunction& mu() const noexcept { return mu_; }
  const Tolerances& tolerances() const noexcept { return tol_; }
  double eq_tol() const noexcept { return tol_.eq; }
  double identity_tol() const noexcept { return tol_.identity; }
  double min_mu() const noexcept { return tol_.min_mu; }

  FieldContext with_kind(ScalarKind kind) const { return FieldContext(kind, mu_, tol_); }

 private:
  ScalarKind kind_;
  MembershipFunction mu_;
  Tolerances tol_;
};

inline MuResolution mu_resolve(const FieldContext& ctx, Complex v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("membership of a non-finite scalar");
  if (ctx.kind() == ScalarKind::real && v.imag() != 0.0) {
    throw DomainError("complex scalar evaluated in a real field context");
  }
  return ctx.mu().resolve(v);
}

inline double mu_eval(const FieldContext& ctx, Complex v) { return mu_resolve(ctx, v).weight; }
inline double mu_eval(const FieldContext& ctx, double v) { return mu_eval(ctx, Complex{v, 0.0}); }

// ---------------------------------------------------------------------------
// Builders

namespace membership {

/// Characteristic function of the whole field: weight 1 everywhere.
inline MembershipFunction crisp() { return MembershipFunction{{}, 1.0}; }

/// Weight 1 on `designated`, `level` everywhere else.
inline MembershipFunction two_level(std::vector<Complex> designated, double level, double tol = kDefaultMatchTol) {
  if (!(level >= 0.0 && level <= 1.0)) throw ValidationError("two-level weight outside [0,1]");
  std::vector<MuRule> rules;
  rules.push_back(MuRule{SetMatcher{std::move(designated), tol}, 1.0});
  return MembershipFunction{std::move(rules), level};
}

inline MembershipFunction two_level(std::span<const double> designated, double level,
                                    double tol = kDefaultMatchTol) {
  std::vector<Complex> values(designated.begin(), designated.end());
  return two_level(std::move(values), level, tol);
}

/// Copy of `base` with `rule` taking precedence over every existing rule.
inline MembershipFunction with_leading_rule(const MembershipFunction& base, MuRule rule) {
  std::vector<MuRule> rules;
  rules.reserve(base.rules().size() + 1);
  rules.push_back(std::move(rule));
  rules.insert(rules.end(), base.rules().begin(), base.rules().end());
  return MembershipFunction{std::move(rules), base.default_weight()};
}

/// Copy of `base` with weight `w` pinned at `point`.
inline MembershipFunction with_point(const MembershipFunction& base, Complex point, double w,
                                     double tol = kDefaultMatchTol) {
  return with_leading_rule(base, MuRule{PointMatcher{point, tol}, w});
}

}  // namespace membership

// ---------------------------------------------------------------------------
// Axiom audit

/// The five closure conditions a fuzzy field's membership must satisfy.
enum class Axiom { sum = 0, negation = 1, product = 2, inverse = 3, unit_values = 4 };

inline constexpr std::array<Axiom, 5> kAllAxioms{Axiom::sum, Axiom::negation, Axiom::product, Axiom::inverse,
                                                 Axiom::unit_values};

inline const char* axiom_id(Axiom a) {
  switch (a) {
    case Axiom::sum: return "i";
    case Axiom::negation: return "ii";
    case Axiom::product: return "iii";
    case Axiom::inverse: return "iv";
    case Axiom::unit_values: return "v";
  }
  return "?";
}

inline const char* axiom_statement(Axiom a) {
  switch (a) {
    case Axiom::sum: return "mu(x+y) >= min(mu(x), mu(y))";
    case Axiom::negation: return "mu(-x) >= mu(x)";
    case Axiom::product: return "mu(xy) >= min(mu(x), mu(y))";
    case Axiom::inverse: return "mu(1/x) >= mu(x)";
    case Axiom::unit_values: return "mu(0) = 1 = mu(1)";
  }
  return "?";
}

struct AxiomViolation {
  Axiom axiom;
  std::vector<Complex> operands;
  double observed;  ///< weight on the constrained side (e.g. mu(x+y))
  double required;  ///< weight it must reach (e.g. min(mu(x), mu(y)))
};

/// Sample-relative audit: verdicts say nothing about points outside the samples.
struct AxiomReport {
  std::array<bool, 5> holds{true, true, true, true, true};
  std::vector<AxiomViolation> violations;
  /// Derived check "ii_symmetry": mu(-a) = mu(a) at every sample.
  bool negation_symmetric = true;
  std::vector<Complex> asymmetric_points;
  std::size_t sample_count = 0;

  bool all_hold() const { return violations.empty(); }
  bool holds_axiom(Axiom a) const { return holds[static_cast<std::size_t>(a)]; }
};

/// Checks every ordered pair of samples; cost O(|samples|^2) membership evaluations.
inline AxiomReport check_axioms(const FieldContext& ctx, std::span<const Complex> samples) {
  if (samples.empty()) throw UsageError("axiom check needs at least one sample");
  const double slack = ctx.eq_tol();
  AxiomReport report;
  report.sample_count = samples.size();

  auto record = [&](Axiom a, std::vector<Complex> ops, double observed, double required) {
    if (observed + slack >= required) return;
    report.holds[static_cast<std::size_t>(a)] = false;
    report.violations.push_back(AxiomViolation{a, std::move(ops), observed, required});
  };

  std::vector<double> w(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) w[i] = mu_eval(ctx, samples[i]);

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Complex x = samples[i];
    const double neg = mu_eval(ctx, -x);
    record(Axiom::negation, {x}, neg, w[i]);
    if (std::abs(neg - w[i]) > slack) {
      report.negation_symmetric = false;
      report.asymmetric_points.push_back(x);
    }
    if (x != Complex{0.0, 0.0}) record(Axiom::inverse, {x}, mu_eval(ctx, 1.0 / x), w[i]);
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = 0; j < samples.size(); ++j) {
      const Complex x = samples[i];
      const Complex y = samples[j];
      const double floor = std::min(w[i], w[j]);
      record(Axiom::sum, {x, y}, mu_eval(ctx, x + y), floor);
      record(Axiom::product, {x, y}, mu_eval(ctx, x * y), floor);
    }
  }
  const double at_zero = mu_eval(ctx, Complex{0.0, 0.0});
  const double at_one = mu_eval(ctx, Complex{1.0, 0.0});
  if (std::abs(at_zero - 1.0) > slack) record(Axiom::unit_values, {Complex{0.0, 0.0}}, at_zero, 1.0);
  if (std::abs(at_one - 1.0) > slack) record(Axiom::unit_values, {Complex{1.0, 0.0}}, at_one, 1.0);
  return report;
}

inline AxiomReport check_axioms(const FieldContext& ctx, std::span<const double> samples) {
  std::vector<Complex> values(samples.begin(), samples.end());
  return check_axioms(ctx, std::span<const Complex>(values));
}

struct MuSummary {
  double inf_mu = 1.0;
  std::size_t count_zero = 0;
};

inline MuSummary mu_summary(const FieldContext& ctx, std::span<const Complex> samples) {
  if (samples.empty()) throw UsageError("membership summary needs at least one sample");
  MuSummary s;
  for (const auto& v : samples) {
    const double w = mu_eval(ctx, v);
    s.inf_mu = std::min(s.inf_mu, w);
    if (w <= ctx.min_mu()) ++s.count_zero;
  }
  return s;
}

inline MuSummary mu_summary(const FieldContext& ctx, std::span<const double> samples) {
  std::vector<Complex> values(samples.begin(), samples.end());
  return mu_summary(ctx, std::span<const Complex>(values));
}

}  // namespace fuzzyfield
