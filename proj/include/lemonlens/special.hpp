#pragma once

namespace lemonlens {

// Regularized incomplete beta I_x(a,b), continued-fraction evaluation.
// Relative accuracy ~1e-15 for a,b in sane ranges. Throws NumericalError
// if the continued fraction fails to converge.
double inc_beta_reg(double a, double b, double x);

// log Beta(a,b) via lgamma.
double log_beta(double a, double b);

// Standard normal pdf/cdf helpers (erfc-based; accurate in both tails).
double norm_pdf(double z);
double norm_cdf(double z);    // Phi(z)
double norm_sf(double z);     // 1 - Phi(z), no cancellation for large z

// Phi(b) - Phi(a) for a <= b, computed on whichever tail keeps the
// subtraction benign: difference of upper tails when both are positive,
// of lower tails when both are negative.
double norm_cdf_diff(double a, double b);

}  // namespace lemonlens
