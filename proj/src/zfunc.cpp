#include "coulomb/zfunc.hpp"

#include <cmath>

#include "coulomb/specfun.hpp"

namespace coulomb {

double logZ_ginibre_exact(int n) {
  if (n < 1) throw InvalidParamsError("logZ_ginibre_exact: n must be >= 1");
  KahanSum lf;  // sum_{k=1}^n log k!
  for (int k = 1; k <= n; ++k) lf.add(log_factorial(static_cast<unsigned>(k)));
  const double nn = n;
  return -0.5 * nn * (nn + 1.0) * std::log(nn) + nn * std::log(M_PI) +
         lf.value();
}

double ginibre_order_n_coefficient() {
  return -1.0 + 0.5 * std::log(2.0) + 1.5 * std::log(M_PI);
}

double logZ_ginibre_asymptotic(int n) {
  if (n < 1) throw InvalidParamsError("logZ_ginibre_asymptotic: n must be >= 1");
  const double nn = n;
  return -0.75 * nn * nn + 0.5 * nn * std::log(nn) +
         nn * ginibre_order_n_coefficient();
}

PartitionReport partition_report(int n, double alpha_hat) {
  PartitionReport r;
  r.n = n;
  r.logZ_exact = logZ_ginibre_exact(n);
  r.logZ_asymptotic = logZ_ginibre_asymptotic(n);
  r.residual = r.logZ_exact - r.logZ_asymptotic;
  r.alpha_conjectural = alpha_hat;
  return r;
}

std::vector<PartitionReport> partition_sweep(int n_max, double alpha_hat) {
  std::vector<PartitionReport> out;
  for (int n = 1; n <= n_max; ++n) out.push_back(partition_report(n, alpha_hat));
  return out;
}

double alpha_conjectural(const EquilibriumMeasure& em, double W_tri) {
  return W_tri / M_PI - 0.5 * em.entropy_integral();
}

AlphaEstimate alpha_estimate(const EquilibriumMeasure& em, double W_tri,
                             double W_err) {
  double quad_err = 0.0;
  const double entropy = em.entropy_integral(&quad_err);
  return {W_tri / M_PI - 0.5 * entropy, 0.5 * quad_err + W_err / M_PI};
}

}  // namespace coulomb
