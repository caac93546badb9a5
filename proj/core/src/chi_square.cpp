#include "rothman/chi_square.hpp"

#include <cmath>
#include <limits>

#include "rothman/error.hpp"

namespace rothman {

namespace {

constexpr int kMaxIterations = 10000;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

void check_args(double a, double x) {
  if (!(a > 0.0)) throw DomainError("incomplete gamma requires a > 0");
  if (!(x >= 0.0)) throw DomainError("incomplete gamma requires x >= 0");
}

// log of x^a e^-x / Gamma(a)
double log_prefactor(double a, double x) { return a * std::log(x) - x - std::lgamma(a); }

double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(log_prefactor(a, x));
}

double gamma_q_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(log_prefactor(a, x)) * h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_continued_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_continued_fraction(a, x);
}

double chi_square_cdf(double x, double df) {
  if (!(df > 0.0)) throw DomainError("chi-square degrees of freedom must be positive");
  return regularized_gamma_p(0.5 * df, 0.5 * x);
}

double chi_square_sf(double x, double df) {
  if (!(df > 0.0)) throw DomainError("chi-square degrees of freedom must be positive");
  return regularized_gamma_q(0.5 * df, 0.5 * x);
}

double chi_square_quantile(double p, double df) {
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("chi-square quantile requires 0 <= p < 1");
  if (p == 0.0) return 0.0;
  double lo = 0.0;
  double hi = std::max(1.0, df);
  while (chi_square_cdf(hi, df) < p) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 4.0 * kEps * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (chi_square_cdf(mid, df) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace rothman
