#pragma once

namespace cochranq {

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), evaluated
/// directly by continued fraction when x >= a + 1 so small tails keep their
/// relative accuracy.
double regularized_gamma_q(double a, double x);

/// Upper tail of the chi-square distribution. Throws InvalidArgument for a
/// non-finite or negative `x` or for `df` < 1.
double chi_square_sf(double x, int df);

/// P{Binomial(n, p) >= k}. Exact finite sum; returns 1 for k == 0 and 0 for k > n.
double binomial_upper_tail(unsigned n, double p, unsigned k);

}  // namespace cochranq
