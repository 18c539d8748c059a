#pragma once

#include <vector>

#include "coulomb/equilibrium.hpp"

namespace coulomb {

/// log of the exact beta = 2, V = |x|^2 partition function
///   Z_n = n^{-n(n+1)/2} pi^n prod_{k=1}^n k!.
double logZ_ginibre_exact(int n);

/// Three-term expansion
///   -3n^2/4 + (n/2) log n + n (-1 + log(2)/2 + 3 log(pi)/2).
double logZ_ginibre_asymptotic(int n);

/// The order-n coefficient of the expansion.
double ginibre_order_n_coefficient();

struct PartitionReport {
  int n = 0;
  double logZ_exact = 0;
  double logZ_asymptotic = 0;
  double residual = 0;
  double alpha_conjectural = 0;
};

PartitionReport partition_report(int n, double alpha_hat);

std::vector<PartitionReport> partition_sweep(int n_max, double alpha_hat = 0.0);

/// alpha = W_tri / pi - (1/2) int m0 log m0, with W_tri the renormalized
/// energy of the triangular lattice standing in for the unproven minimum
/// over unit-density fields. Conjectural by construction.
double alpha_conjectural(const EquilibriumMeasure& em, double W_tri);

struct AlphaEstimate {
  double value = 0;
  double error = 0;  // entropy quadrature + the W error bar
};

AlphaEstimate alpha_estimate(const EquilibriumMeasure& em, double W_tri,
                             double W_err = 0.0);

}  // namespace coulomb
