#pragma once

// Named experiments reproducing four counterexamples about membership-weighted limits.
//
// All demos share a base membership: 0 everywhere except weight 1 at 0 and 1. The unit
// points take precedence over demo rules, so x_1 = ln 1 + 1 = 1 gets weight 1 rather
// than the family weight 1/8.

#include <cmath>
#include <string>
#include <vector>

#include "fuzzyfield/errors.hpp"
#include "fuzzyfield/membership.hpp"
#include "fuzzyfield/sequences.hpp"

namespace fuzzyfield {

inline const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names{"nonunique_limit", "unbounded_convergent", "unbounded_convergent_literal",
                                              "sum_failure", "product_failure"};
  return names;
}

namespace detail {

inline std::vector<MuRule> unit_points() {
  return {MuRule{PointMatcher{0.0}, 1.0}, MuRule{PointMatcher{1.0}, 1.0}};
}

inline FieldContext demo_context(std::vector<MuRule> specific) {
  auto rules = unit_points();
  for (auto& r : specific) rules.push_back(std::move(r));
  return FieldContext(ScalarKind::real, MembershipFunction(std::move(rules), 0.0));
}

// n / (n+1)^3
inline RationalWeight n_over_np1_cubed() { return {{0, 1}, {1, 3, 3, 1}}; }
// n^2 / (2n+1)^3
inline RationalWeight nsq_over_2np1_cubed() { return {{0, 0, 1}, {1, 6, 12, 8}}; }

// x_n = ln n + 1 with mu(x_n) = mu(ln n + sqrt 2) = n/(n+1)^3, zero elsewhere.
// The second family is x_n - (1 - sqrt 2), so both 0 and 1 - sqrt 2 are limits.
// ln n + sqrt 2 passes within 1e-9 of some ln m + 1 dozens of times below 1e5, so the
// matchers use a tolerance just above the evaluation error.
inline ExperimentSpec nonunique_limit() {
  constexpr double kFamilyTol = 1e-14;
  const Index horizon = 100'000;
  const double root2 = std::sqrt(2.0);
  ExperimentSpec e;
  e.name = "nonunique_limit";
  e.primary = SequenceSpec{LogPlus{1.0}, 1, horizon};
  e.context = demo_context({
      MuRule{FamilyMatcher{LogPlus{1.0}, 1, horizon, kFamilyTol}, MuForm{n_over_np1_cubed()}},
      MuRule{FamilyMatcher{LogPlus{root2}, 1, horizon, kFamilyTol}, MuForm{n_over_np1_cubed()}},
  });
  e.targets = {Target{Expr::self, 0.0, "(ln n + 1) n/(n+1)^3"},
               Target{Expr::self, 1.0 - root2, "(ln n + sqrt 2) n/(n+1)^3"}};
  e.horizon = horizon;
  e.notes = {"x_n = ln n + 1 diverges classically yet has two membership-weighted limits"};
  return e;
}

// x_n = e^n + 2 with mu(x_n) = 1. The weight 1/(e^n+1)^2 is bound to x_n - 1 = e^n + 1,
// which is what convergence to 1 needs. The literal variant binds it to x_n + 1 instead,
// leaving x_n - 1 at weight 0 so that convergence to 1 holds only trivially.
inline ExperimentSpec unbounded_convergent(bool literal) {
  ExperimentSpec e;
  e.name = literal ? "unbounded_convergent_literal" : "unbounded_convergent";
  e.primary = SequenceSpec{ExpPlus{2.0}, 1, 600};
  e.context = demo_context({});
  e.assignment.entries = {MuAssignmentEntry{Expr::self, 0.0, ConstWeight{1.0}},
                          MuAssignmentEntry{Expr::self, literal ? -1.0 : 1.0, InvExpPlusOneSquared{}}};
  e.targets = {Target{Expr::self, 1.0, "1/(e^n + 1)"}};
  e.horizon = 600;
  e.notes = {literal ? "weight form bound to x_n + 1 as written; x_n - 1 falls to the default 0"
                     : "weight form bound to x_n - 1 = e^n + 1"};
  return e;
}

// x_n = y_n = (1 + 1/n)^2 with mu(x_n - 1) = n^2/(2n+1)^3 and mu(2 x_n) = n^2/(2(n+1)^3).
// The sum's deviation from 0 is 1/(n+1); 2 x_n - 2 keeps the default weight 0.
inline ExperimentSpec sum_failure() {
  const Index horizon = 2'500'000;
  ExperimentSpec e;
  e.name = "sum_failure";
  e.primary = SequenceSpec{SquareRatio{}, 1, horizon};
  e.partner = SequenceSpec{SquareRatio{}, 1, horizon};
  e.context = demo_context({});
  e.assignment.entries = {
      MuAssignmentEntry{Expr::self, 1.0, nsq_over_2np1_cubed()},
      MuAssignmentEntry{Expr::partner, 1.0, nsq_over_2np1_cubed()},
      MuAssignmentEntry{Expr::sum, 0.0, RationalWeight{{0, 0, 1}, {2, 6, 6, 2}}},
  };
  e.targets = {Target{Expr::self, 1.0, "1/(2n+1)^2"}, Target{Expr::partner, 1.0, "1/(2n+1)^2"},
               Target{Expr::sum, 0.0, "1/(n+1)"}, Target{Expr::sum, 2.0, std::nullopt}};
  e.horizon = horizon;
  e.notes = {"membership-weighted limits 1 and 1 do not add: the sum tends to 0",
             "horizon 2.5e6 lets both inputs also converge classically at eps 1e-6"};
  return e;
}

// x_n = (1 + 1/n)^2, y_n = (n+1)/(3n+1), mu(x_n - 1) = n^2/(2n+1)^3,
// mu(y_n - 1/3) = 3(3n+1)/(2n^2), mu(x_n y_n) = 1/n. The y weight exceeds 1 for n < 5,
// so the scan starts at n = 5.
inline ExperimentSpec product_failure() {
  const Index horizon = 2'500'000;
  ExperimentSpec e;
  e.name = "product_failure";
  e.primary = SequenceSpec{SquareRatio{}, 5, horizon};
  e.partner = SequenceSpec{Moebius{1, 1, 3, 1}, 5, horizon};
  e.context = demo_context({});
  e.assignment.entries = {
      MuAssignmentEntry{Expr::self, 1.0, nsq_over_2np1_cubed()},
      MuAssignmentEntry{Expr::partner, 1.0 / 3.0, RationalWeight{{3, 9}, {0, 0, 2}}},
      MuAssignmentEntry{Expr::product, 0.0, RationalWeight{{1}, {0, 1}}},
  };
  e.targets = {Target{Expr::self, 1.0, "1/(2n+1)^2"}, Target{Expr::partner, 1.0 / 3.0, "1/n^2"},
               Target{Expr::product, 0.0, "x_n y_n / n"}, Target{Expr::product, 1.0 / 3.0, std::nullopt}};
  e.horizon = horizon;
  e.notes = {"membership-weighted limits 1 and 1/3 do not multiply: the product tends to 0",
             "n_min = 5 keeps mu(y_n - 1/3) inside [0, 1]"};
  return e;
}

}  // namespace detail

/// Throws UsageError listing the catalog for unknown names.
inline ExperimentSpec demo_catalog(const std::string& name) {
  if (name == "nonunique_limit") return detail::nonunique_limit();
  if (name == "unbounded_convergent") return detail::unbounded_convergent(false);
  if (name == "unbounded_convergent_literal") return detail::unbounded_convergent(true);
  if (name == "sum_failure") return detail::sum_failure();
  if (name == "product_failure") return detail::product_failure();
  std::string known;
  for (const auto& n : demo_names()) known += (known.empty() ? "" : ", ") + n;
  throw UsageError("unknown demo '" + name + "'; available: " + known);
}

}  // namespace fuzzyfield
