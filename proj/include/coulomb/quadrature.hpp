#pragma once

#include <functional>
#include <vector>

namespace coulomb {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;   // estimated absolute error
  int intervals = 0;
};

/// Adaptive Gauss-Kronrod (G7,K15) on [a,b] to absolute tolerance abs_tol.
/// Globally adaptive: the interval with the largest error estimate is
/// bisected until the summed estimate drops below abs_tol.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol = 1e-12,
                           int max_intervals = 4000);

/// Same, but the interval is pre-split at the given interior breakpoints
/// (integrand kinks, regime changes).
QuadratureResult integrate_split(const std::function<double(double)>& f,
                                 double a, double b,
                                 const std::vector<double>& breakpoints,
                                 double abs_tol = 1e-12,
                                 int max_intervals = 4000);

}  // namespace coulomb
