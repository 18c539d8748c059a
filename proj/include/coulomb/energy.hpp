#pragma once

#include <cstdint>

#include "coulomb/equilibrium.hpp"
#include "coulomb/potential.hpp"

namespace coulomb {

/// w_n = -sum_{i != j} log|x_i - x_j| + n sum_i V(x_i).
/// Exact O(n^2) pair sum with compensated accumulation; the ordered pair
/// sum counts each unordered pair twice. Throws
/// SingularConfigurationError on coincident points.
double hamiltonian(const Configuration& cfg, const Potential& p);

/// Pair term only: -sum_{i != j} log|x_i - x_j|.
double pair_energy(const Configuration& cfg);

/// d w_n / d x_i = -2 sum_{j != i} (x_i - x_j)/|x_i - x_j|^2 + n grad V(x_i).
Configuration grad_hamiltonian(const Configuration& cfg, const Potential& p);

/// I(mu0) = L0 + int V dmu0, recomputed by quadrature.
double energy_functional_I(const EquilibriumMeasure& em);

/// The exact splitting of w_n into macroscopic, logarithmic and O(n)
/// parts, evaluated along two routes that share only U:
///   path A:  F_n = (w_n - n^2 I0 + (n/2) log n) / n
///   path B:  F_n = F_hat_n + 2 sum_i zeta(x_i), with
///            F_hat_n = W(grad H'_n, 1) / (n pi) expanded into
///            pair, cross and self terms of the blown-up field.
struct EnergyReport {
  double w_n = 0;
  double F_n_splitting = 0;  // path A
  double F_n_direct = 0;     // path B
  double F_hat_n = 0;
  double zeta_sum = 0;
  double residual = 0;  // |path A - path B|
};

EnergyReport splitting_report(const Configuration& cfg,
                              const EquilibriumMeasure& em);

enum class FeketeStatus { Converged, MaxIterations, Stagnated };

struct FeketeOptions {
  int max_iters = 20000;
  double grad_tol = 0.0;  // 0 means the 1e-8 * n default
  int multistarts = 1;
  std::uint64_t seed = 1;
  bool conjugate = true;  // Polak-Ribiere directions with restarts
  // (iteration, w) per accepted step; fires from whichever worker runs
  // the start, so keep it reentrant when multistarts > 1
  std::function<void(int, double)> on_accept;
};

struct FeketeResult {
  Configuration points;
  double w = 0;
  double grad_norm_inf = 0;
  int iterations = 0;
  FeketeStatus status = FeketeStatus::Converged;
  int best_start = -1;  // -1 = descent from the supplied configuration
};

/// Minimizes w_n by descent with Armijo backtracking. With
/// multistarts > 1, additional starts are drawn from mu0 by rejection
/// (independent per-start streams); the result never has higher w_n than
/// the supplied configuration. Accepted steps are monotone in w_n.
FeketeResult minimize_fekete(const Configuration& cfg0,
                             const EquilibriumMeasure& em,
                             const FeketeOptions& opts = {});

/// Smallest pairwise distance; 0-point and 1-point configurations
/// return +infinity.
double min_pair_distance(const Configuration& cfg);

}  // namespace coulomb
