#pragma once

// Seeded randomized sweeps over both identity registries.
//
// Each trial draws fresh operands and, unless a fixed membership is supplied, a fresh
// membership: 0 and 1 get weight 1, each operand a shares one random weight with -a, and
// everything else gets a random default. About one weight in twenty is exactly 0 so that
// precondition guards are exercised.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fuzzyfield/complex_field.hpp"
#include "fuzzyfield/errors.hpp"
#include "fuzzyfield/identity_report.hpp"
#include "fuzzyfield/membership.hpp"
#include "fuzzyfield/real_field.hpp"

namespace fuzzyfield {

struct IdentityTally {
  std::string id;
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t unmet = 0;
  double max_residual = 0.0;
  std::optional<IdentityCheckReport> first_failure;
};

struct SweepOptions {
  std::vector<std::string> ids;  ///< empty: every corrected registry entry
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  bool include_literal = false;  ///< also run C7-literal and P1-literal
  std::optional<MembershipFunction> fixed_mu;
  Tolerances tol{};
};

struct SweepReport {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  bool random_mu = true;
  std::vector<IdentityTally> tallies;

  bool all_passed() const {
    for (const auto& t : tallies)
      if (t.fail > 0) return false;
    return true;
  }
};

inline bool is_real_identity(const std::string& id) {
  for (const auto& info : real_identities())
    if (info.id == id) return true;
  return false;
}

inline std::vector<std::string> all_identity_ids(bool include_literal) {
  std::vector<std::string> ids;
  for (const auto& info : real_identities()) ids.push_back(info.id);
  for (const auto& info : complex_identities()) ids.push_back(info.id);
  if (include_literal)
    for (const auto& info : literal_complex_identities()) ids.push_back(info.id);
  return ids;
}

namespace detail {

class SweepSampler {
 public:
  explicit SweepSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  double weight() {
    if (uniform(0.0, 1.0) < 0.05) return 0.0;
    return 1.0 - uniform(0.0, 1.0);  // (0, 1]
  }

  double real() { return uniform(-10.0, 10.0); }

  Complex complex_log_uniform(double lo, double hi) {
    const double r = std::exp(uniform(std::log(lo), std::log(hi)));
    return std::polar(r, uniform(-std::numbers::pi, std::numbers::pi));
  }

  Complex complex_box(double half) { return {uniform(-half, half), uniform(-half, half)}; }

  MembershipFunction membership(const std::vector<Complex>& operands) {
    std::vector<MuRule> rules{MuRule{PointMatcher{Complex{0.0, 0.0}}, 1.0}, MuRule{PointMatcher{Complex{1.0, 0.0}}, 1.0}};
    for (const auto& a : operands) rules.push_back(MuRule{SetMatcher{{a, -a}}, weight()});
    return MembershipFunction(std::move(rules), weight());
  }

 private:
  std::mt19937_64 rng_;
};

inline std::vector<Complex> draw_operands(SweepSampler& s, const std::string& id) {
  if (id == "S1") {
    std::vector<Complex> ops{std::exp(s.uniform(std::log(1e-6), 0.0))};
    const int size = s.integer(1, 8);
    for (int i = 0; i < size; ++i) ops.emplace_back(s.real());
    return ops;
  }
  if (is_real_identity(id)) {
    if (id == "R5a" || id == "R5b") return {s.real(), s.uniform(0.0, 10.0)};
    const auto arity = detail::lookup(real_identities(), id).arity;
    std::vector<Complex> ops;
    for (std::size_t i = 0; i < arity; ++i) ops.emplace_back(s.real());
    return ops;
  }
  if (id == "EN1") return {};
  if (id == "E1" || id == "E2") return {s.complex_box(5.0), s.complex_box(5.0)};
  if (id == "EN2") return {s.complex_box(5.0), Complex{static_cast<double>(s.integer(-5, 5)), 0.0}};
  if (id == "P1" || id == "P1-literal" || id == "P2") {
    if (id == "P2") return {s.complex_log_uniform(1e-2, 1e2), s.complex_log_uniform(1e-2, 1e2), s.complex_box(3.0)};
    return {s.complex_log_uniform(1e-2, 1e2), s.complex_box(3.0), s.complex_box(3.0)};
  }
  const auto arity = detail::lookup_complex(id).arity;
  std::vector<Complex> ops;
  for (std::size_t i = 0; i < arity; ++i) ops.push_back(s.complex_log_uniform(1e-3, 1e3));
  return ops;
}

inline IdentityCheckReport run_one(const std::string& id, const std::vector<Complex>& ops, const MembershipFunction& mu,
                                   const Tolerances& tol) {
  if (is_real_identity(id)) {
    std::vector<double> reals;
    for (const auto& z : ops) reals.push_back(z.real());
    return check_real_identity(FieldContext(ScalarKind::real, mu, tol), id, reals);
  }
  return check_complex_identity(FieldContext(ScalarKind::complex, mu, tol), id, ops);
}

}  // namespace detail

/// Unknown ids throw UsageError before any trial runs.
inline SweepReport sweep_identities(const SweepOptions& opt) {
  std::vector<std::string> ids = opt.ids.empty() ? all_identity_ids(opt.include_literal) : opt.ids;
  if (!opt.ids.empty() && opt.include_literal) {
    for (const auto& info : literal_complex_identities()) {
      const auto base = info.id.substr(0, info.id.find('-'));
      if (std::find(ids.begin(), ids.end(), base) != ids.end() && std::find(ids.begin(), ids.end(), info.id) == ids.end())
        ids.push_back(info.id);
    }
  }
  for (const auto& id : ids)
    if (!is_real_identity(id)) detail::lookup_complex(id);

  SweepReport report;
  report.seed = opt.seed;
  report.trials = opt.trials;
  report.random_mu = !opt.fixed_mu;
  detail::SweepSampler sampler(opt.seed);
  for (const auto& id : ids) {
    IdentityTally tally;
    tally.id = id;
    for (std::size_t trial = 0; trial < opt.trials; ++trial) {
      const auto ops = detail::draw_operands(sampler, id);
      const MembershipFunction mu = opt.fixed_mu ? *opt.fixed_mu : sampler.membership(ops);
      const auto r = detail::run_one(id, ops, mu, opt.tol);
      switch (r.verdict) {
        case Verdict::pass: ++tally.pass; break;
        case Verdict::precondition_unmet: ++tally.unmet; break;
        case Verdict::fail:
          ++tally.fail;
          if (!tally.first_failure) tally.first_failure = r;
          break;
      }
      if (r.verdict != Verdict::precondition_unmet) tally.max_residual = std::max(tally.max_residual, r.residual);
    }
    report.tallies.push_back(std::move(tally));
  }
  return report;
}

}  // namespace fuzzyfield
