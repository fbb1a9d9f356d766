#pragma once

/**
 * @file complex_field.hpp
 * @brief Membership-weighted complex operations on principal branches.
 *
 * Branch conventions: Arg takes values in (-pi, pi] and a zero imaginary part
 * of either sign counts as +0, so every negative real has Arg = pi. Log is the
 * principal logarithm and powers use branch 0 unless told otherwise.
 */

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyfield/errors.hpp"
#include "fuzzyfield/identity_report.hpp"
#include "fuzzyfield/membership.hpp"
#include "fuzzyfield/real_field.hpp"

namespace fuzzyfield {

inline constexpr double kExpGuard = 700.0;

namespace detail {

inline void require_finite(Complex z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError(std::string(what) + ": non-finite operand");
  }
}

inline void require_nonzero(Complex z, const char* what) {
  if (z == Complex{0.0, 0.0}) throw DomainError(std::string(what) + ": argument/log undefined at 0");
}

inline Complex guarded_exp(Complex w, const char* what) {
  if (std::abs(w.real()) > kExpGuard) throw RangeError(std::string(what) + ": |Re| exceeds the overflow guard");
  return std::exp(w);
}

}  // namespace detail

/// Principal argument in (-pi, pi]; -0 imaginary parts are read as +0.
inline double principal_arg(Complex z) {
  detail::require_nonzero(z, "arg");
  const double im = z.imag() == 0.0 ? 0.0 : z.imag();
  return std::atan2(im, z.real());
}

inline Complex principal_log(Complex z) {
  detail::require_nonzero(z, "log");
  return {std::log(std::abs(z)), principal_arg(z)};
}

/// conj(z) * mu(z)
inline Complex mu_conj(const FieldContext& ctx, Complex z) {
  detail::require_finite(z, "mu_conj");
  return std::conj(z) * mu_eval(ctx, z);
}

/// |z| * mu(z)
inline double mu_abs_c(const FieldContext& ctx, Complex z) {
  detail::require_finite(z, "mu_abs");
  return std::abs(z) * mu_eval(ctx, z);
}

/// Arg(z) * mu(z); throws DomainError at z = 0.
inline double mu_arg(const FieldContext& ctx, Complex z) {
  detail::require_finite(z, "mu_arg");
  return principal_arg(z) * mu_eval(ctx, z);
}

/// The branch constant k in {-1, 0, 1} with Arg(z1 z2) = Arg z1 + Arg z2 + 2 k pi.
struct ArgAdjustment {
  int k = 0;
};

/// k from the sum s of principal arguments: 0 on (-pi, pi], 1 for s <= -pi, -1 for s > pi.
inline ArgAdjustment branch_for_sum(double s) {
  constexpr double pi = std::numbers::pi;
  if (s > pi) return {-1};
  if (s <= -pi) return {1};
  return {0};
}

inline ArgAdjustment arg_k(Complex z1, Complex z2) {
  return branch_for_sum(principal_arg(z1) + principal_arg(z2));
}

/// exp(z) * mu(z); RangeError when |Re z| > 700.
inline Complex mu_exp(const FieldContext& ctx, Complex z) {
  detail::require_finite(z, "mu_exp");
  return detail::guarded_exp(z, "mu_exp") * mu_eval(ctx, z);
}

/// Log(z) * mu(z); DomainError at z = 0.
inline Complex mu_log(const FieldContext& ctx, Complex z) {
  detail::require_finite(z, "mu_log");
  return principal_log(z) * mu_eval(ctx, z);
}

/// a^z * mu(z) on the given branch: exp(z (Log a + 2 pi i branch)) * mu(z). Branch 0 is the p.v.
inline Complex mu_pow(const FieldContext& ctx, Complex base, Complex z, int branch = 0) {
  detail::require_finite(base, "mu_pow");
  detail::require_finite(z, "mu_pow");
  detail::require_nonzero(base, "mu_pow");
  const Complex log_base = principal_log(base) + Complex{0.0, 2.0 * std::numbers::pi * branch};
  return detail::guarded_exp(z * log_base, "mu_pow") * mu_eval(ctx, z);
}

/// The alternative reading exp_mu(z Log a) = exp(z Log a) * mu(z Log a).
inline Complex mu_pow_exp_form(const FieldContext& ctx, Complex base, Complex z, int branch = 0) {
  detail::require_nonzero(base, "mu_pow");
  const Complex log_base = principal_log(base) + Complex{0.0, 2.0 * std::numbers::pi * branch};
  return mu_exp(ctx, z * log_base);
}

/// Relative residual between the primary power and its exp form; nonzero unless mu(z Log a) = mu(z).
inline double pow_form_residual(const FieldContext& ctx, Complex base, Complex z, int branch = 0) {
  return relative_residual(mu_pow(ctx, base, z, branch), mu_pow_exp_form(ctx, base, z, branch));
}

// ---------------------------------------------------------------------------
// Complex identity registry

inline const std::vector<IdentityInfo>& complex_identities() {
  static const std::vector<IdentityInfo> table{
      {"C1", 1, false, "conj_mu(conj_mu(z)) = z mu(z) mu(conj_mu(z))"},
      {"C2", 2, false, "conj_mu(z1+z2)/mu(z1+z2) = conj_mu(z1)/mu(z1) + conj_mu(z2)/mu(z2)"},
      {"C3", 2, false, "conj_mu(z1-z2)/mu(z1-z2) = conj_mu(z1)/mu(z1) - conj_mu(z2)/mu(z2)"},
      {"C4", 2, false, "conj_mu(z1 z2)/mu(z1 z2) = (conj_mu(z1)/mu(z1)) (conj_mu(z2)/mu(z2))"},
      {"C5", 2, false, "conj_mu(z1/z2)/mu(z1/z2) = (conj_mu(z1)/conj_mu(z2)) (mu(z2)/mu(z1))"},
      {"C6", 1, false, "z mu(z) + conj_mu(z) = 2 Re(z) mu(z)"},
      {"C7", 1, false, "z mu(z) - conj_mu(z) = 2 i Im(z) mu(z)"},
      {"M1", 2, false, "|z1 z2|_mu/mu(z1 z2) = (|z1|_mu/mu(z1)) (|z2|_mu/mu(z2))"},
      {"M2", 2, false, "|z1+z2|_mu/mu(z1+z2) <= |z1|_mu/mu(z1) + |z2|_mu/mu(z2)"},
      {"M3", 2, false, "|z1/z2|_mu/mu(z1/z2) = (|z1|_mu/|z2|_mu) (mu(z2)/mu(z1))"},
      {"M4", 1, false, "|conj_mu(z)| = |z| mu(z)"},
      {"M5", 2, false, "|z1-z2|_mu/mu(z1-z2) >= |z1|_mu/mu(z1) - |z2|_mu/mu(z2)"},
      {"M6", 1, false, "|z|_mu >= Re(z) mu(z) and |z|_mu >= Im(z) mu(z)"},
      {"M7", 1, false, "z conj_mu(z) = |z|^2 mu(z)"},
      {"A1", 2, false, "arg_mu(z1 z2)/mu(z1 z2) = arg_mu(z1)/mu(z1) + arg_mu(z2)/mu(z2) + 2 k pi"},
      {"E1", 2, false, "exp_mu(z1+z2)/mu(z1+z2) = (exp_mu(z1)/mu(z1)) (exp_mu(z2)/mu(z2))"},
      {"E2", 2, false, "exp_mu(z1-z2)/mu(z1-z2) = (exp_mu(z1)/exp_mu(z2)) (mu(z2)/mu(z1))"},
      {"EN1", 0, false, "exp_mu(0) = exp(0) mu(0) = 1"},
      {"EN2", 2, false, "(exp_mu(z)/mu(z))^n = exp_mu(nz)/mu(nz)"},
      {"L1", 2, false, "Log_mu(z1 z2)/mu(z1 z2) = Log_mu(z1)/mu(z1) + Log_mu(z2)/mu(z2) + 2 pi i k_log"},
      {"L2", 2, false, "Log_mu(z1/z2)/mu(z1/z2) = Log_mu(z1)/mu(z1) - Log_mu(z2)/mu(z2) + 2 pi i k_log"},
      {"P1", 3, false, "pv(a_mu^(z1+z2))/mu(z1+z2) = (pv(a_mu^z1)/mu(z1)) (pv(a_mu^z2)/mu(z2))"},
      {"P2", 3, false, "(ab)_mu^z mu(z) = a_mu^z b_mu^z when arg_k(a,b) = 0"},
  };
  return table;
}

/// Literal renderings kept for comparison; both are false in general.
inline const std::vector<IdentityInfo>& literal_complex_identities() {
  static const std::vector<IdentityInfo> table{
      {"C7-literal", 1, false, "z mu(z) - conj_mu(z) = 2 Im(z) mu(z)"},
      {"P1-literal", 3, false, "pv(a_mu^(z1+z2))/mu(z1+z2) = pv(a_mu^z1)/mu(z1) + pv(a_mu^z2)/mu(z2)"},
  };
  return table;
}

namespace detail {

inline const IdentityInfo& lookup_complex(std::string_view id) {
  for (const auto* table : {&complex_identities(), &literal_complex_identities()})
    for (const auto& info : *table)
      if (info.id == id) return info;
  throw UsageError("unknown identity '" + std::string(id) + "'");
}

}  // namespace detail

/// Evaluates one complex registry entry. Operands: z | z1, z2 | a, z1, z2 (P1) | a, b, z (P2) | z, n (EN2).
inline IdentityCheckReport check_complex_identity(const FieldContext& ctx, std::string_view id,
                                                  std::span<const Complex> operands) {
  const auto& info = detail::lookup_complex(id);
  if (operands.size() != info.arity) {
    throw UsageError("identity " + info.id + " expects " + std::to_string(info.arity) + " operand(s)");
  }
  for (const auto& z : operands) detail::require_finite(z, "identity operand");

  const std::vector<Complex> ops(operands.begin(), operands.end());
  const std::string name = info.id;
  auto mu = [&ctx](Complex z) { return mu_eval(ctx, z); };
  auto positive = [&ctx](std::initializer_list<double> ws) { return detail::positive_weights(ctx, ws); };
  const char* zero_weight = "a referenced membership is zero";
  const Complex z1 = operands.empty() ? Complex{} : operands[0];
  const Complex z2 = operands.size() > 1 ? operands[1] : Complex{};
  constexpr double two_pi = 2.0 * std::numbers::pi;

  if (name == "C1") {
    const Complex w = mu_conj(ctx, z1);
    return report::equality(ctx, name, ops, mu_conj(ctx, w), z1 * mu(z1) * mu(w));
  }
  if (name == "C2" || name == "C3" || name == "C4" || name == "C5") {
    if (name == "C5" && z2 == Complex{0.0, 0.0}) return report::unmet(name, ops, "division by zero");
    const Complex combined = name == "C2" ? z1 + z2 : name == "C3" ? z1 - z2 : name == "C4" ? z1 * z2 : z1 / z2;
    if (!positive({mu(z1), mu(z2), mu(combined)})) return report::unmet(name, ops, zero_weight);
    const Complex lhs = mu_conj(ctx, combined) / mu(combined);
    const Complex r1 = mu_conj(ctx, z1) / mu(z1);
    const Complex r2 = mu_conj(ctx, z2) / mu(z2);
    Complex rhs;
    if (name == "C2") rhs = r1 + r2;
    else if (name == "C3") rhs = r1 - r2;
    else if (name == "C4") rhs = r1 * r2;
    else rhs = (mu_conj(ctx, z1) / mu_conj(ctx, z2)) * (mu(z2) / mu(z1));
    return report::equality(ctx, name, ops, lhs, rhs);
  }
  if (name == "C6") {
    return report::equality(ctx, name, ops, z1 * mu(z1) + mu_conj(ctx, z1), 2.0 * z1.real() * mu(z1));
  }
  if (name == "C7" || name == "C7-literal") {
    const Complex lhs = z1 * mu(z1) - mu_conj(ctx, z1);
    const Complex corrected = Complex{0.0, 2.0 * z1.imag() * mu(z1)};
    const Complex literal = 2.0 * z1.imag() * mu(z1);
    auto r = report::equality(ctx, name, ops, lhs, name == "C7" ? corrected : literal);
    r.diagnostics.emplace_back("corrected_residual", relative_residual(lhs, corrected));
    r.diagnostics.emplace_back("literal_residual", relative_residual(lhs, literal));
    return r;
  }
  if (name == "M1" || name == "M2" || name == "M3" || name == "M5") {
    if (name == "M3" && z2 == Complex{0.0, 0.0}) return report::unmet(name, ops, "division by zero");
    const Complex combined = name == "M1" ? z1 * z2 : name == "M2" ? z1 + z2 : name == "M3" ? z1 / z2 : z1 - z2;
    if (!positive({mu(z1), mu(z2), mu(combined)})) return report::unmet(name, ops, zero_weight);
    const double lhs = mu_abs_c(ctx, combined) / mu(combined);
    const double r1 = mu_abs_c(ctx, z1) / mu(z1);
    const double r2 = mu_abs_c(ctx, z2) / mu(z2);
    if (name == "M1") return report::equality(ctx, name, ops, lhs, r1 * r2);
    if (name == "M2") return report::at_most(ctx, name, ops, lhs, r1 + r2);
    if (name == "M3") return report::equality(ctx, name, ops, lhs, (mu_abs_c(ctx, z1) / mu_abs_c(ctx, z2)) * (mu(z2) / mu(z1)));
    return report::at_most(ctx, name, ops, r1 - r2, lhs);
  }
  if (name == "M4") return report::equality(ctx, name, ops, std::abs(mu_conj(ctx, z1)), std::abs(z1) * mu(z1));
  if (name == "M6") {
    const double modulus = mu_abs_c(ctx, z1);
    const auto re = report::at_most(ctx, name, ops, z1.real() * mu(z1), modulus);
    const auto im = report::at_most(ctx, name, ops, z1.imag() * mu(z1), modulus);
    auto r = re.residual >= im.residual ? re : im;
    r.diagnostics.emplace_back("re_residual", re.residual);
    r.diagnostics.emplace_back("im_residual", im.residual);
    return r;
  }
  if (name == "M7") {
    return report::equality(ctx, name, ops, z1 * mu_conj(ctx, z1), std::norm(z1) * mu(z1));
  }
  if (name == "A1") {
    detail::require_nonzero(z1, "A1");
    detail::require_nonzero(z2, "A1");
    const Complex product = z1 * z2;
    if (!positive({mu(z1), mu(z2), mu(product)})) return report::unmet(name, ops, zero_weight);
    const int k = arg_k(z1, z2).k;
    auto r = report::equality(ctx, name, ops, mu_arg(ctx, product) / mu(product),
                              mu_arg(ctx, z1) / mu(z1) + mu_arg(ctx, z2) / mu(z2) + two_pi * k);
    r.diagnostics.emplace_back("k", k);
    return r;
  }
  if (name == "E1" || name == "E2") {
    const Complex combined = name == "E1" ? z1 + z2 : z1 - z2;
    if (!positive({mu(z1), mu(z2), mu(combined)})) return report::unmet(name, ops, zero_weight);
    const Complex lhs = mu_exp(ctx, combined) / mu(combined);
    const Complex rhs = name == "E1" ? (mu_exp(ctx, z1) / mu(z1)) * (mu_exp(ctx, z2) / mu(z2))
                                     : (mu_exp(ctx, z1) / mu_exp(ctx, z2)) * (mu(z2) / mu(z1));
    return report::equality(ctx, name, ops, lhs, rhs);
  }
  if (name == "EN1") {
    const Complex origin{0.0, 0.0};
    if (std::abs(mu(origin) - 1.0) > ctx.eq_tol()) return report::unmet(name, ops, "mu(0) != 1");
    return report::equality(ctx, name, ops, mu_exp(ctx, origin), std::exp(origin) * mu(origin));
  }
  if (name == "EN2") {
    const double n_real = z2.real();
    if (z2.imag() != 0.0 || n_real != std::round(n_real)) return report::unmet(name, ops, "n must be an integer");
    const int n = static_cast<int>(n_real);
    const Complex nz = static_cast<double>(n) * z1;
    if (!positive({mu(z1), mu(nz)})) return report::unmet(name, ops, zero_weight);
    auto r = report::equality(ctx, name, ops, std::pow(mu_exp(ctx, z1) / mu(z1), n), mu_exp(ctx, nz) / mu(nz));
    r.diagnostics.emplace_back("n", n);
    return r;
  }
  if (name == "L1" || name == "L2") {
    detail::require_nonzero(z1, name.c_str());
    detail::require_nonzero(z2, name.c_str());
    const bool product = name == "L1";
    const Complex combined = product ? z1 * z2 : z1 / z2;
    if (!positive({mu(z1), mu(z2), mu(combined)})) return report::unmet(name, ops, zero_weight);
    const Complex r1 = mu_log(ctx, z1) / mu(z1);
    const Complex r2 = mu_log(ctx, z2) / mu(z2);
    const int k = product ? arg_k(z1, z2).k : branch_for_sum(principal_arg(z1) - principal_arg(z2)).k;
    const Complex uncorrected = product ? r1 + r2 : r1 - r2;
    const Complex lhs = mu_log(ctx, combined) / mu(combined);
    auto r = report::equality(ctx, name, ops, lhs, uncorrected + Complex{0.0, two_pi * k});
    r.diagnostics.emplace_back("k_log", k);
    r.diagnostics.emplace_back("uncorrected_residual", relative_residual(lhs, uncorrected));
    return r;
  }
  if (name == "P1" || name == "P1-literal") {
    const Complex base = operands[0];
    const Complex w1 = operands[1];
    const Complex w2 = operands[2];
    detail::require_nonzero(base, name.c_str());
    if (!positive({mu(w1), mu(w2), mu(w1 + w2)})) return report::unmet(name, ops, zero_weight);
    const Complex lhs = mu_pow(ctx, base, w1 + w2) / mu(w1 + w2);
    const Complex p1 = mu_pow(ctx, base, w1) / mu(w1);
    const Complex p2 = mu_pow(ctx, base, w2) / mu(w2);
    auto r = report::equality(ctx, name, ops, lhs, name == "P1" ? p1 * p2 : p1 + p2);
    r.diagnostics.emplace_back("multiplicative_residual", relative_residual(lhs, p1 * p2));
    r.diagnostics.emplace_back("additive_residual", relative_residual(lhs, p1 + p2));
    return r;
  }
  // P2
  const Complex a = operands[0];
  const Complex b = operands[1];
  const Complex z = operands[2];
  detail::require_nonzero(a, "P2");
  detail::require_nonzero(b, "P2");
  const int k = arg_k(a, b).k;
  if (k != 0) {
    auto r = report::unmet(name, ops, "arg_k(a, b) != 0: Log(ab) leaves the principal branch");
    r.diagnostics.emplace_back("k", k);
    return r;
  }
  auto r = report::equality(ctx, name, ops, mu_pow(ctx, a * b, z) * mu(z), mu_pow(ctx, a, z) * mu_pow(ctx, b, z));
  r.diagnostics.emplace_back("k", k);
  return r;
}

}  // namespace fuzzyfield
