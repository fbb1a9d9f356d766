#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fuzzyfield/sequences.hpp"
#include "support.hpp"

using namespace fuzzyfield;

namespace {

ExperimentSpec single(SequenceSpec seq, FieldContext ctx, Index horizon) {
  ExperimentSpec e;
  e.primary = seq;
  e.context = std::move(ctx);
  e.horizon = horizon;
  return e;
}

FieldContext crisp() { return FieldContext(ScalarKind::real, membership::crisp()); }

}  // namespace

TEST(Terms, ClosedForms) {
  EXPECT_DOUBLE_EQ(term_at(SequenceSpec{LogPlus{1.0}}, 1), 1.0);
  EXPECT_DOUBLE_EQ(term_at(SequenceSpec{SquareRatio{}}, 2), 2.25);
  EXPECT_DOUBLE_EQ(term_at(SequenceSpec{Moebius{1, 1, 3, 1}}, 5), 0.375);
  EXPECT_DOUBLE_EQ(term_at(SequenceSpec{ExpPlus{2.0}, 1, 700}, 3), std::exp(3.0) + 2.0);
  EXPECT_EQ(term_at(SequenceSpec{ConstantValue{5.0}}, 77), 5.0);
  EXPECT_EQ(term_at(SequenceSpec{TableValues{{4.0, 5.0, 6.0}}, 3, 5}, 4), 5.0);
}

TEST(Terms, RangeAndCaps) {
  EXPECT_THROW(term_at(SequenceSpec{LogPlus{1.0}, 1, 10}, 11), UsageError);
  EXPECT_THROW(term_at(SequenceSpec{LogPlus{1.0}, 2, 10}, 1), UsageError);
  EXPECT_THROW((SequenceSpec{ExpPlus{0.0}, 1, 701}.validate()), UsageError);
  EXPECT_NO_THROW((SequenceSpec{ExpPlus{0.0}, 1, 700}.validate()));
  EXPECT_THROW((SequenceSpec{TableValues{{1.0, 2.0}}, 1, 3}.validate()), UsageError);
  // (n + 1) / (n - 2) has a pole at n = 2.
  EXPECT_THROW(term_at(SequenceSpec{Moebius{1, 1, 1, -2}, 1, 10}, 2), DomainError);
}

TEST(Experiment, ValidationCatchesStructuralErrors) {
  auto e = single(SequenceSpec{SquareRatio{}, 1, 100}, crisp(), 200);
  EXPECT_THROW(e.validate(), UsageError);  // horizon past n_max
  e.horizon = 100;
  e.targets = {Target{Expr::sum, 0.0, std::nullopt}};
  EXPECT_THROW(e.validate(), UsageError);  // no partner
  e.targets.clear();
  e.assignment.entries.push_back(MuAssignmentEntry{Expr::self, 1.0, RationalWeight{{3, 9}, {0, 0, 2}}});
  EXPECT_THROW(e.validate(), ValidationError);  // weight 6 at n = 1
  e.primary.n_min = 5;
  EXPECT_NO_THROW(e.validate());
}

TEST(Deviation, WorkedValues) {
  auto e = single(SequenceSpec{LogPlus{1.0}}, FieldContext(ScalarKind::real, MembershipFunction({}, 1.0)), 100);
  e.assignment.entries.push_back(MuAssignmentEntry{Expr::self, 0.0, RationalWeight{{0, 1}, {1, 3, 3, 1}}});
  EXPECT_NEAR(scaled_deviation(e, Expr::self, 0.0, 3), oracle::log_deviation(3), 1e-16);
  EXPECT_NEAR(scaled_deviation(e, Expr::self, 0.0, 3), 0.09837245103131764, 1e-15);
  // Unassigned candidate falls back to the context membership.
  EXPECT_DOUBLE_EQ(scaled_deviation(e, Expr::self, 1.0, 1), 0.0);
  EXPECT_THROW(scaled_deviation(e, Expr::self, 0.0, 101), UsageError);

  auto r = single(SequenceSpec{ExpPlus{2.0}, 1, 600}, crisp(), 600);
  r.assignment.entries.push_back(MuAssignmentEntry{Expr::self, 1.0, InvExpPlusOneSquared{}});
  EXPECT_NEAR(scaled_deviation(r, Expr::self, 1.0, 7), 0.0009110511944006454, 1e-16);
}

TEST(Classical, ReferenceScans) {
  const auto sq = classical_converges(SequenceSpec{SquareRatio{}, 1, 10'000}, 1.0, {1e-2}, 10'000);
  ASSERT_TRUE(sq.n_for(1e-2).has_value());
  EXPECT_EQ(*sq.n_for(1e-2), 201);
  EXPECT_EQ(sq.status, ConvergenceStatus::supported);

  const auto lg = classical_converges(SequenceSpec{LogPlus{1.0}, 1, 10'000}, 5.0, {1e-1}, 10'000);
  EXPECT_EQ(lg.status, ConvergenceStatus::refuted_at_horizon);
  EXPECT_FALSE(lg.n_for(1e-1).has_value());

  const auto c = classical_converges(SequenceSpec{ConstantValue{5.0}, 3, 100}, 5.0, {1e-6}, 100);
  EXPECT_EQ(*c.n_for(1e-6), 3);
}

TEST(Classical, MatchesOracleOnRandomMoebius) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> coef(0.1, 5.0);
  for (int i = 0; i < 20; ++i) {
    const Moebius m{coef(rng), coef(rng), coef(rng), coef(rng)};
    const double l = m.a / m.c;
    const auto v = classical_converges(SequenceSpec{m, 1, 20'000}, l, {1e-2, 1e-3}, 20'000);
    for (const double eps : {1e-2, 1e-3}) {
      const auto want = oracle::min_index(
          [&](std::int64_t n) {
            const double x = static_cast<double>(n);
            return std::abs((m.a * x + m.b) / (m.c * x + m.d) - l);
          },
          1, 20'000, eps);
      EXPECT_EQ(v.n_for(eps), want);
    }
  }
}

TEST(Verdict, EpsTableIsAntitone) {
  auto e = single(SequenceSpec{SquareRatio{}, 1, 50'000}, crisp(), 50'000);
  e.eps_schedule = {1e-1, 3e-2, 1e-2, 1e-3, 1e-4};
  const auto v = mu_converges(e, Expr::self, 1.0);
  for (std::size_t i = 1; i < v.eps_table.size(); ++i) EXPECT_GE(*v.eps_table[i].n, *v.eps_table[i - 1].n);
  ASSERT_TRUE(v.tail_certificate.has_value());
  EXPECT_EQ(v.tail_certificate->kind, TailCertificate::Kind::monotone_envelope);
}

TEST(Verdict, TrivialWhenTailWeightsVanish) {
  // Default weight 0 everywhere except the unit points: every candidate is supported-trivially.
  const FieldContext ctx(ScalarKind::real, MembershipFunction({MuRule{SetMatcher{{0.0, 1.0}}, 1.0}}, 0.0));
  const auto e = single(SequenceSpec{SquareRatio{}, 1, 1000}, ctx, 1000);
  const auto v = mu_converges(e, Expr::self, 42.0);
  EXPECT_EQ(v.status, ConvergenceStatus::supported_trivially);
  EXPECT_DOUBLE_EQ(v.trivial_tail_fraction, 1.0);
  EXPECT_TRUE(v.supported());
  EXPECT_FALSE(v.nontrivially_supported());
}

TEST(Verdict, EnvelopeUsedWhenTailIsNotMonotone) {
  // 1/n with a wiggle: every other term is halved, so deviations are not monotone.
  std::vector<double> values;
  for (int n = 1; n <= 400; ++n) values.push_back(1.0 + (n % 2 ? 1.0 : 0.5) / n);
  auto e = single(SequenceSpec{TableValues{values}, 1, 400}, crisp(), 400);
  e.eps_schedule = {0.1, 0.01};
  const auto bare = mu_converges(e, Expr::self, 1.0);
  EXPECT_EQ(bare.status, ConvergenceStatus::supported);
  EXPECT_FALSE(bare.tail_certificate.has_value());
  const auto declared = mu_converges(e, Target{Expr::self, 1.0, "1/n"});
  ASSERT_TRUE(declared.tail_certificate.has_value());
  EXPECT_EQ(declared.tail_certificate->kind, TailCertificate::Kind::analytic_bound);
  EXPECT_EQ(declared.tail_certificate->form, "1/n");
}

TEST(Properties, DominationAndFloorEquivalence) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> coef(0.5, 4.0), level(0.1, 1.0);
  const std::vector<double> eps{1e-1, 1e-2, 1e-3};
  for (int i = 0; i < 25; ++i) {
    const Moebius m{coef(rng), coef(rng), coef(rng), coef(rng)};
    const double l = m.a / m.c;
    const double a = level(rng);
    auto e = single(SequenceSpec{m, 1, 50'000}, FieldContext(ScalarKind::real, membership::two_level(std::vector<Complex>{0.0, 1.0}, a)), 50'000);
    e.eps_schedule = eps;
    const auto mu = mu_converges(e, Expr::self, l);
    const auto cl = classical_converges(e.primary, l, eps, 50'000);
    std::vector<double> scaled_eps;
    for (const double x : eps) scaled_eps.push_back(x / a);
    const auto cl_scaled = classical_converges(e.primary, l, scaled_eps, 50'000);
    for (std::size_t k = 0; k < eps.size(); ++k) {
      // Domination: classical support implies mu-support no later.
      if (cl.eps_table[k].n) {
        ASSERT_TRUE(mu.eps_table[k].n);
        EXPECT_LE(*mu.eps_table[k].n, *cl.eps_table[k].n);
      }
      // Weights are >= a, so mu-support at eps gives classical support at eps / a from the same index.
      if (mu.eps_table[k].n) {
        ASSERT_TRUE(cl_scaled.eps_table[k].n);
        EXPECT_LE(*cl_scaled.eps_table[k].n, *mu.eps_table[k].n);
      }
    }
  }
}

TEST(Bounds, SequenceReports) {
  const auto sq = seq_bounded_report(single(SequenceSpec{SquareRatio{}, 1, 1000}, crisp(), 1000));
  EXPECT_DOUBLE_EQ(*sq.sup_mu, 4.0);
  EXPECT_EQ(sq.sup_witness, 1.0);
  EXPECT_TRUE(sq.within_probe);

  auto ex = single(SequenceSpec{ExpPlus{2.0}, 1, 14}, crisp(), 14);
  const auto r = seq_bounded_report(ex);
  EXPECT_FALSE(r.within_probe);
  EXPECT_EQ(*r.first_exceeding_index, 14);
  EXPECT_NEAR(r.max_abs_scaled, std::exp(14.0) + 2.0, 1e-6);
}

TEST(Monotone, WorkedExamples) {
  const auto up = check_monotone(single(SequenceSpec{Moebius{1, -1, 1, 0}, 1, 1000}, crisp(), 1000));
  EXPECT_EQ(up.verdict, Verdict::pass);
  EXPECT_NEAR(*up.diagnostic("horizon_sup"), 1.0 - 1.0 / 1000.0, 1e-15);

  const auto down = check_monotone(single(SequenceSpec{Moebius{0, 1, 1, 0}, 1, 1000}, crisp(), 1000));
  EXPECT_EQ(down.verdict, Verdict::fail);
  EXPECT_EQ(*down.diagnostic("first_violation"), 1.0);

  // n^2/(n+1) passes the 1e6 probe shortly after n = 1e6.
  auto unbounded = single(SequenceSpec{Moebius{1, 0, 0, 1}, 1, 2'000'000}, crisp(), 2'000'000);
  unbounded.assignment.entries.push_back(MuAssignmentEntry{Expr::self, 0.0, RationalWeight{{0, 1}, {1, 1}}});
  EXPECT_EQ(check_monotone(unbounded).verdict, Verdict::precondition_unmet);
}

TEST(FloorBound, HoldsForNonnegativeLimits) {
  const FieldContext ctx(ScalarKind::real, membership::two_level(std::vector<Complex>{0.0, 1.0}, 0.5));
  const auto e = single(SequenceSpec{Moebius{1, 1, 1, 0}, 1, 2000}, ctx, 2000);
  const auto r = check_floor_bound(e, Expr::self, 1.0, 0.5);
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_EQ(r.lhs.real(), -0.25);
  EXPECT_EQ(r.rhs.real(), 4.0);
}

TEST(FloorBound, LowerBoundNeedsNonnegativeLimit) {
  // x_n = -3 + 1/n with weight 1/2: x_n mu(x_n) -> -1.5, below a(la - 1) = -1.25.
  const FieldContext ctx(ScalarKind::real, membership::two_level(std::vector<Complex>{0.0, 1.0}, 0.5));
  const auto e = single(SequenceSpec{Moebius{-3, 1, 1, 0}, 1, 2000}, ctx, 2000);
  const auto r = check_floor_bound(e, Expr::self, -3.0, 0.5);
  EXPECT_EQ(r.verdict, Verdict::fail);
  EXPECT_TRUE(r.diagnostic("first_violation").has_value());
}

TEST(FloorBound, UnmetBelowFloor) {
  const FieldContext ctx(ScalarKind::real, membership::two_level(std::vector<Complex>{0.0, 1.0}, 0.2));
  const auto e = single(SequenceSpec{Moebius{1, 1, 1, 0}, 1, 100}, ctx, 100);
  EXPECT_EQ(check_floor_bound(e, Expr::self, 1.0, 0.5).verdict, Verdict::precondition_unmet);
  EXPECT_THROW(check_floor_bound(e, Expr::self, 1.0, 0.0), UsageError);
}

TEST(Experiment, ClassicalArithmeticUnderCrispMu) {
  ExperimentSpec e;
  e.primary = SequenceSpec{SquareRatio{}, 1, 3'000'000};
  e.partner = SequenceSpec{Moebius{1, 1, 3, 1}, 1, 3'000'000};
  e.context = crisp();
  e.horizon = 3'000'000;
  e.targets = {Target{Expr::self, 1.0, std::nullopt}, Target{Expr::partner, 1.0 / 3.0, std::nullopt}};
  const auto r = run_experiment(e);
  ASSERT_EQ(r.arithmetic.size(), 2u);
  EXPECT_DOUBLE_EQ(r.arithmetic[0].expected, 4.0 / 3.0);
  EXPECT_EQ(r.arithmetic[0].verdict.status, ConvergenceStatus::supported);
  EXPECT_DOUBLE_EQ(r.arithmetic[1].expected, 1.0 / 3.0);
  EXPECT_EQ(r.arithmetic[1].verdict.status, ConvergenceStatus::supported);
}

TEST(Experiment, MissingPartnerIsUsageError) {
  auto e = single(SequenceSpec{SquareRatio{}, 1, 100}, crisp(), 100);
  e.targets = {Target{Expr::product, 0.0, std::nullopt}};
  EXPECT_THROW(run_experiment(e), UsageError);
}
