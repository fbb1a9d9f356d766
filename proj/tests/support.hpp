#pragma once

// Independent oracles and generators shared by the unit and acceptance tests. Nothing
// here calls into the convergence scanner; oracles evaluate closed forms directly.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "fuzzyfield/fuzzyfield.hpp"

namespace oracle {

/// Smallest k in [start, horizon] with f(n) < eps for all n in [k, horizon], by backward scan.
inline std::optional<std::int64_t> min_index(const std::function<double(std::int64_t)>& f, std::int64_t start,
                                             std::int64_t horizon, double eps) {
  std::optional<std::int64_t> k;
  for (std::int64_t n = horizon; n >= start; --n) {
    if (!(f(n) < eps)) break;
    k = n;
  }
  return k;
}

/// (ln n + 1) n / (n+1)^3: scaled deviation of ln n + 1 from 0 under weight n/(n+1)^3.
inline double log_deviation(std::int64_t n) {
  const double x = static_cast<double>(n);
  return (std::log(x) + 1.0) * x / ((x + 1.0) * (x + 1.0) * (x + 1.0));
}

/// 1 / (e^n + 1)
inline double exp_deviation(std::int64_t n) { return 1.0 / (std::exp(static_cast<double>(n)) + 1.0); }

/// For f(n) = 1/(n+1): the smallest N with 1/(n+1) < eps for all n >= N. When 1/eps is an
/// integer up to rounding, f(1/eps - 1) equals eps and the strict inequality there is decided by
/// the last bit, so `tie` is set and N may be either n - 1 or n.
struct ReciprocalN {
  std::int64_t n;
  bool tie;
};

inline ReciprocalN reciprocal_threshold(double eps) {
  const long double inv = 1.0L / static_cast<long double>(eps);
  const long double nearest = std::round(inv);
  if (std::fabs(inv - nearest) <= 1e-9L * inv) return {static_cast<std::int64_t>(nearest), true};
  return {static_cast<std::int64_t>(std::floor(inv)), false};  // n + 1 > inv  <=>  n >= floor(inv)
}

/// Scan results may differ from an oracle by one index only where the oracle sits on eps itself.
inline bool agrees_up_to_tie(const std::function<double(std::int64_t)>& f, std::int64_t got, std::int64_t want,
                             double eps) {
  if (got == want) return true;
  if (std::llabs(got - want) != 1) return false;
  return std::fabs(f(std::min(got, want)) / eps - 1.0) < 1e-9;
}

}  // namespace oracle

namespace gen {

/// A membership with exactly one targeted closure axiom broken on `samples`, which must be
/// positive reals of at least 2 so that no sum, product, negation or inverse of samples lands
/// on 0, 1 or another derived point.
inline fuzzyfield::MembershipFunction single_axiom_mutation(fuzzyfield::Axiom axiom, const std::vector<double>& samples,
                                                            std::mt19937_64& rng) {
  using namespace fuzzyfield;
  const auto crisp = membership::crisp();
  std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
  const double a = samples[pick(rng)];
  const double b = samples[pick(rng)];
  const double w = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
  switch (axiom) {
    case Axiom::sum: return membership::with_point(crisp, a + b, w);
    case Axiom::negation: return membership::with_point(crisp, -a, w);
    case Axiom::product: return membership::with_point(crisp, a * b, w);
    case Axiom::inverse: return membership::with_point(crisp, 1.0 / a, w);
    case Axiom::unit_values: return membership::with_point(crisp, (rng() & 1U) ? 0.0 : 1.0, w);
  }
  return crisp;
}

inline std::vector<double> positive_samples(std::mt19937_64& rng, std::size_t count) {
  std::uniform_real_distribution<double> u(2.0, 10.0);
  std::vector<double> s(count);
  for (auto& v : s) v = u(rng);
  return s;
}

}  // namespace gen
