// Library tour: build a membership, compare scaled values, evaluate a complex
// operation, and certify a convergence candidate.

#include <cstdio>
#include <vector>

#include "fuzzyfield/fuzzyfield.hpp"

int main() {
  using namespace fuzzyfield;

  // Weight 1/2 on +-2, 1 everywhere else.
  const MembershipFunction mu({MuRule{SetMatcher{{2.0, -2.0}}, 0.5}}, 1.0);
  const FieldContext real(ScalarKind::real, mu);
  std::printf("|2|_mu = %g\n", mu_abs(real, 2.0));
  std::printf("2 vs 1.5 under the mu-order: %s\n", to_string(mu_compare(real, 2.0, 1.5)));

  const std::vector<double> set{0.5, 1.5, 2.0};
  const auto sup = mu_sup(real, set);
  std::printf("mu-sup of {0.5, 1.5, 2} = %g (witness %g)\n", sup.value, sup.witness);

  const FieldContext complex(ScalarKind::complex, mu);
  const auto z = mu_log(complex, Complex{-1.0, 0.0});
  std::printf("Log_mu(-1) = %g%+gi\n", z.real(), z.imag());

  // x_n = 1 + 1/n converges to 1 under any membership.
  ExperimentSpec e;
  e.primary = SequenceSpec{Moebius{1, 1, 1, 0}, 1, 10'000};
  e.context = real;
  e.targets = {Target{Expr::self, 1.0, std::nullopt}};
  e.horizon = 10'000;
  e.eps_schedule = {0.05, 0.004};
  const auto verdict = mu_converges(e, e.targets.front());
  std::printf("x_n = 1 + 1/n toward 1: %s, N(0.004) = %lld\n", to_string(verdict.status),
              static_cast<long long>(verdict.n_for(0.004).value_or(-1)));
  return 0;
}
