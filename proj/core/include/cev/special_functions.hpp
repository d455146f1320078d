#pragma once

namespace cev {

// Regularized lower incomplete gamma P(s, x), absolute accuracy ~1e-12.
// Series expansion for x < s + 1, Lentz continued fraction otherwise.
// Throws validation_error for s <= 0 or x < 0, numerical_error on
// non-convergence.
double reg_lower_gamma(double s, double x);

// Noncentral chi-square CDF: sum_j e^{-lam/2} (lam/2)^j / j! * P(k/2 + j, x/2),
// accumulated from the Poisson mode outward in both directions until the
// truncated tail mass is below 1e-13. Absolute accuracy ~1e-10.
double ncx2_cdf(double x, double k, double lambda);

// Standard normal CDF, absolute accuracy well below 1e-12.
double normal_cdf(double z);

} // namespace cev
