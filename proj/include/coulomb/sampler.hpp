#pragma once

#include <cstdint>
#include <vector>

#include "coulomb/energy.hpp"
#include "coulomb/equilibrium.hpp"

namespace coulomb {

struct McmcParams {
  double beta = 2.0;
  int n_particles = 0;
  int n_sweeps = 0;
  int burn_in_sweeps = 0;
  double proposal_sigma = 0.0;  // 0 means the 0.5/sqrt(n) default
  std::uint64_t seed = 1;
  int thinning = 1;

  void validate() const;
  double sigma() const;
};

struct ChainStats {
  double acceptance_rate = 0;
  double autocorrelation_time = 0;  // sweeps, from the w_n series
  bool act_degenerate = false;
  std::vector<double> w_series;     // thinned, post burn-in
  double max_resync_drift = 0;      // incremental vs recomputed energy
};

struct McmcRun {
  std::vector<Configuration> samples;
  ChainStats stats;
};

/// Single-particle Metropolis for the Gibbs law with density
/// proportional to exp(-(beta/2) w_n). Isotropic Gaussian proposals;
/// acceptance min(1, exp(-(beta/2) dw)) with dw computed in O(n) per
/// move. One sweep proposes each particle once, in index order. The
/// running energy is resynchronized against a full recomputation every
/// 1000 accepted moves. Deterministic given the seed.
///
/// The chain starts from a mu0 sample drawn from the same stream unless
/// an initial configuration is supplied.
McmcRun mcmc_chain(const EquilibriumMeasure& em, const McmcParams& params,
                   const Configuration* initial = nullptr);

/// Eigenvalues of an n x n matrix with i.i.d. complex Gaussian entries of
/// variance 1/n, as a point configuration. The empirical law matches the
/// Gibbs law at beta = 2, V = |x|^2.
Configuration ginibre_exact(int n, std::uint64_t seed);

struct ActEstimate {
  double act = 0;
  double stderr_mean = 0;
  bool degenerate = false;
};

/// Integrated autocorrelation time by Geyer's initial-positive-sequence
/// estimator, and the matching standard error of the series mean.
/// A constant series is flagged degenerate with act = series length.
ActEstimate chain_diagnostics(const std::vector<double>& series);

/// Two-sided Kolmogorov-Smirnov statistic between two samples.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Energy change of moving particle i to xnew, computed in O(n); the
/// kernel behind each Metropolis step.
double mcmc_delta_w(const Configuration& cfg, const Potential& p,
                    Eigen::Index i, const Vec2& xnew);

}  // namespace coulomb
