#pragma once

namespace coulomb {

/// log Gamma(x) for x > 0, Lanczos approximation (g = 7, 9 terms).
/// Relative accuracy ~1e-13 over the positive axis.
double log_gamma(double x);

/// log(n!) = log_gamma(n + 1).
double log_factorial(unsigned n);

/// Exponential integral E1(x) for x > 0.
/// Power series for x <= 1, modified Lentz continued fraction beyond.
double exp_int_e1(double x);

}  // namespace coulomb
