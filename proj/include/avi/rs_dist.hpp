#pragma once

// Robbins-Siegmund distribution: the law of sup_{t>=1} { W(t)^2 / t - log t }
// for a standard Wiener process W. Its CDF is
//
//   Psi(r) = 1 - 2 [ 1 - Phi(sqrt r) + sqrt(r) phi(sqrt r) ],   r >= 0,
//
// which plays the role for time-uniform boundaries that Phi plays for
// fixed-n inference. All functions here are pure and thread-safe; non-finite
// arguments raise std::domain_error.

namespace avi {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal upper tail 1 - Phi(x), accurate for large x.
double normal_sf(double x);

double normal_pdf(double x);

/// Psi(r). Extended to r < 0 by returning 0, so that a statistic below the
/// boundary maps to a p-value of 1.
double rs_cdf(double r);

/// 1 - Psi(r), evaluated without cancellation. Returns 1 for r < 0.
double rs_survival(double r);

/// dPsi/dr = sqrt(r) exp(-r/2) / sqrt(2 pi). Maximum is phi(1) < 1/4.
/// Throws for r < 0.
double rs_density(double r);

/// Inverse of Psi on [0, 1). Bracketed bisection to 1e-12 in r.
double rs_quantile(double p);

}  // namespace avi
