#pragma once

// Small exact rational type for standardization sums. Counts in a cohort
// table are at most a few million, so products of a handful of them fit in
// 128 bits; callers fall back to floating point when an operation overflows.

#include <cstdint>
#include <optional>

namespace rothman::detail {

__extension__ typedef __int128 Int128;

inline Int128 gcd128(Int128 a, Int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

struct Rational {
  Int128 num = 0;
  Int128 den = 1;

  static std::optional<Rational> make(Int128 n, Int128 d) {
    if (d == 0) return std::nullopt;
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const Int128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    return Rational{n, d};
  }

  double to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
};

inline std::optional<Rational> multiply(const Rational& a, const Rational& b) {
  // Cross-reduce first to keep intermediates small.
  const Int128 g1 = gcd128(a.num, b.den);
  const Int128 g2 = gcd128(b.num, a.den);
  const Int128 an = g1 > 1 ? a.num / g1 : a.num;
  const Int128 bd = g1 > 1 ? b.den / g1 : b.den;
  const Int128 bn = g2 > 1 ? b.num / g2 : b.num;
  const Int128 ad = g2 > 1 ? a.den / g2 : a.den;
  Int128 n, d;
  if (__builtin_mul_overflow(an, bn, &n) || __builtin_mul_overflow(ad, bd, &d)) {
    return std::nullopt;
  }
  return Rational::make(n, d);
}

inline std::optional<Rational> add(const Rational& a, const Rational& b) {
  const Int128 g = gcd128(a.den, b.den);
  const Int128 a_scale = b.den / g;
  const Int128 b_scale = a.den / g;
  Int128 left, right, n, d;
  if (__builtin_mul_overflow(a.num, a_scale, &left) ||
      __builtin_mul_overflow(b.num, b_scale, &right) || __builtin_add_overflow(left, right, &n) ||
      __builtin_mul_overflow(a.den, a_scale, &d)) {
    return std::nullopt;
  }
  return Rational::make(n, d);
}

}  // namespace rothman::detail
