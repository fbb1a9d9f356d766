#pragma once

// Closed-form building blocks shared by membership rules and sequences:
// weight forms w(n) and value families v(n) indexed by a positive integer n.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "fuzzyfield/errors.hpp"

namespace fuzzyfield {

using Complex = std::complex<double>;
using Index = std::int64_t;

// ---------------------------------------------------------------------------
// Weight forms w(n)

struct ConstWeight {
  double value = 1.0;
};

/// P(n) / Q(n) with coefficients in ascending powers of n.
struct RationalWeight {
  std::vector<double> num;
  std::vector<double> den;
};

/// 1 / (e^n + 1)^2
struct InvExpPlusOneSquared {};

using MuForm = std::variant<ConstWeight, RationalWeight, InvExpPlusOneSquared>;

namespace detail {

inline double horner(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace detail

inline double evaluate(const MuForm& form, Index n) {
  const double x = static_cast<double>(n);
  return std::visit(
      detail::overloaded{
          [](const ConstWeight& w) { return w.value; },
          [x](const RationalWeight& w) { return detail::horner(w.num, x) / detail::horner(w.den, x); },
          [x](const InvExpPlusOneSquared&) {
            // e^{-2n} / (1 + e^{-n})^2, no overflow for large n
            const double t = std::exp(-x);
            return (t * t) / ((1.0 + t) * (1.0 + t));
          },
      },
      form);
}

inline std::string form_id(const MuForm& form) {
  return std::visit(detail::overloaded{
                        [](const ConstWeight&) { return std::string("const"); },
                        [](const RationalWeight&) { return std::string("rational_poly"); },
                        [](const InvExpPlusOneSquared&) { return std::string("inv_exp_p1_sq"); },
                    },
                    form);
}

// ---------------------------------------------------------------------------
// Value families v(n)

/// ln n + c
struct LogPlus {
  double c = 0.0;
};

/// e^n + c. Index capped at 700 to stay inside double range.
struct ExpPlus {
  double c = 0.0;
};

/// scale * (1 + 1/n)^2 + offset
struct SquareRatio {
  double scale = 1.0;
  double offset = 0.0;
};

/// (a n + b) / (c n + d)
struct Moebius {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double d = 1.0;
};

using FamilyForm = std::variant<LogPlus, ExpPlus, SquareRatio, Moebius>;

inline constexpr Index kExpIndexCap = 700;
inline constexpr Index kNoIndexCap = std::numeric_limits<Index>::max();

template <class F>
inline double evaluate_family(const F& f, Index n) {
  const double x = static_cast<double>(n);
  if constexpr (std::is_same_v<F, LogPlus>) {
    return std::log(x) + f.c;
  } else if constexpr (std::is_same_v<F, ExpPlus>) {
    return std::exp(x) + f.c;
  } else if constexpr (std::is_same_v<F, SquareRatio>) {
    const double r = 1.0 + 1.0 / x;
    return f.scale * r * r + f.offset;
  } else {
    return (f.a * x + f.b) / (f.c * x + f.d);
  }
}

inline double evaluate(const FamilyForm& form, Index n) {
  return std::visit([n](const auto& f) { return evaluate_family(f, n); }, form);
}

/// Largest index at which the family is representable in double precision.
inline Index index_cap(const FamilyForm& form) {
  return std::holds_alternative<ExpPlus>(form) ? kExpIndexCap : kNoIndexCap;
}

/// Real-valued estimate of the index n with v(n) == value, if the family can be inverted there.
inline std::optional<double> index_estimate(const FamilyForm& form, double value) {
  const double est = std::visit(
      detail::overloaded{
          [value](const LogPlus& f) { return std::exp(value - f.c); },
          [value](const ExpPlus& f) {
            const double shifted = value - f.c;
            return shifted > 0.0 ? std::log(shifted) : std::numeric_limits<double>::quiet_NaN();
          },
          [value](const SquareRatio& f) {
            if (f.scale == 0.0) return std::numeric_limits<double>::quiet_NaN();
            const double w = (value - f.offset) / f.scale;
            if (!(w > 0.0)) return std::numeric_limits<double>::quiet_NaN();
            const double r = std::sqrt(w) - 1.0;
            return r > 0.0 ? 1.0 / r : std::numeric_limits<double>::infinity();
          },
          [value](const Moebius& f) { return (f.b - f.d * value) / (f.c * value - f.a); },
      },
      form);
  if (std::isnan(est)) return std::nullopt;
  return est;
}

inline std::string form_id(const FamilyForm& form) {
  return std::visit(detail::overloaded{
                        [](const LogPlus&) { return std::string("log_n_plus_c"); },
                        [](const ExpPlus&) { return std::string("exp_n_plus_c"); },
                        [](const SquareRatio&) { return std::string("sq_ratio"); },
                        [](const Moebius&) { return std::string("moebius"); },
                    },
                    form);
}

}  // namespace fuzzyfield
