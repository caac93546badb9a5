#pragma once

namespace rothman {

/// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
/// Series expansion for x < a + 1, Lentz continued fraction otherwise.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

/// P(a = df/2, x/2). Requires x >= 0 and df > 0.
double chi_square_cdf(double x, double df);
/// Upper tail, computed directly rather than as 1 - cdf.
double chi_square_sf(double x, double df);
/// Inverse of chi_square_cdf for p in [0, 1).
double chi_square_quantile(double p, double df);

}  // namespace rothman
