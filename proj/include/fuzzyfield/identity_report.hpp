#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "fuzzyfield/membership.hpp"

namespace fuzzyfield {

enum class Verdict { pass, fail, precondition_unmet };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::precondition_unmet: return "precondition-unmet";
  }
  return "?";
}

/// Outcome of evaluating both sides of one identity at one operand tuple.
/// Invariant: verdict == pass iff residual <= identity_tol and every precondition held.
struct IdentityCheckReport {
  std::string id;
  std::vector<Complex> operands;
  Complex lhs{};
  Complex rhs{};
  double residual = 0.0;
  Verdict verdict = Verdict::pass;
  std::vector<std::string> notes;
  std::vector<std::pair<std::string, double>> diagnostics;

  bool passed() const { return verdict == Verdict::pass; }

  std::optional<double> diagnostic(const std::string& key) const {
    for (const auto& [k, v] : diagnostics)
      if (k == key) return v;
    return std::nullopt;
  }
};

/// |lhs - rhs| / max(1, |lhs|, |rhs|)
inline double relative_residual(Complex lhs, Complex rhs) {
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return std::abs(lhs - rhs) / scale;
}

namespace report {

inline IdentityCheckReport equality(const FieldContext& ctx, std::string id, std::vector<Complex> operands,
                                    Complex lhs, Complex rhs) {
  IdentityCheckReport r;
  r.id = std::move(id);
  r.operands = std::move(operands);
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = relative_residual(lhs, rhs);
  r.verdict = r.residual <= ctx.identity_tol() ? Verdict::pass : Verdict::fail;
  return r;
}

/// One-sided check of lhs <= rhs with eq_tol slack; the residual is the relative excess beyond the slack.
inline IdentityCheckReport at_most(const FieldContext& ctx, std::string id, std::vector<Complex> operands,
                                   double lhs, double rhs) {
  IdentityCheckReport r;
  r.id = std::move(id);
  r.operands = std::move(operands);
  r.lhs = lhs;
  r.rhs = rhs;
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  r.residual = std::max(0.0, lhs - rhs - ctx.eq_tol()) / scale;
  r.verdict = r.residual <= ctx.identity_tol() ? Verdict::pass : Verdict::fail;
  return r;
}

inline IdentityCheckReport unmet(std::string id, std::vector<Complex> operands, std::string why) {
  IdentityCheckReport r;
  r.id = std::move(id);
  r.operands = std::move(operands);
  r.verdict = Verdict::precondition_unmet;
  r.notes.push_back(std::move(why));
  return r;
}

/// Implication whose hypothesis is false: holds vacuously.
inline IdentityCheckReport vacuous(std::string id, std::vector<Complex> operands) {
  IdentityCheckReport r;
  r.id = std::move(id);
  r.operands = std::move(operands);
  r.verdict = Verdict::pass;
  r.notes.emplace_back("hypothesis false; implication holds vacuously");
  return r;
}

}  // namespace report

}  // namespace fuzzyfield
