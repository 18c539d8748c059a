#include "coulomb/sampler.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace coulomb {

void McmcParams::validate() const {
  if (!(beta > 0)) throw InvalidParamsError("mcmc: beta must be > 0");
  if (n_particles < 1) throw InvalidParamsError("mcmc: n_particles must be >= 1");
  if (n_sweeps < 1) throw InvalidParamsError("mcmc: n_sweeps must be >= 1");
  if (burn_in_sweeps < 0 || burn_in_sweeps >= n_sweeps)
    throw InvalidParamsError("mcmc: burn_in_sweeps must be in [0, n_sweeps)");
  if (thinning < 1) throw InvalidParamsError("mcmc: thinning must be >= 1");
  if (proposal_sigma < 0) throw InvalidParamsError("mcmc: proposal_sigma must be > 0");
}

double McmcParams::sigma() const {
  // 1/sqrt(n) lands the acceptance rate near 0.5 for the quadratic
  // ensemble across desk-scale n.
  return proposal_sigma > 0 ? proposal_sigma
                            : 1.0 / std::sqrt(static_cast<double>(n_particles));
}

double mcmc_delta_w(const Configuration& cfg, const Potential& p,
                    Eigen::Index i, const Vec2& xnew) {
  const Eigen::Index n = cfg.rows();
  const Vec2 xold = cfg.row(i).transpose();
  KahanSum pair;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j == i) continue;
    const Vec2 xj = cfg.row(j).transpose();
    pair.add(std::log((xnew - xj).squaredNorm()) -
             std::log((xold - xj).squaredNorm()));
  }
  // ordered pairs count each bond twice; log of the squared norm supplies
  // the factor already
  return -pair.value() +
         static_cast<double>(n) * (p.value(xnew) - p.value(xold));
}

McmcRun mcmc_chain(const EquilibriumMeasure& em, const McmcParams& params,
                   const Configuration* initial) {
  params.validate();
  const Potential& p = em.potential();
  const Eigen::Index n = params.n_particles;
  const double sigma = params.sigma();
  Rng rng(params.seed);

  Configuration cfg =
      initial ? *initial : em.sample_configuration(n, rng);
  if (cfg.rows() != n) throw InvalidParamsError("mcmc: initial size mismatch");
  double w = hamiltonian(cfg, p);

  McmcRun run;
  std::uint64_t proposals = 0, accepted = 0, since_resync = 0;
  for (int sweep = 0; sweep < params.n_sweeps; ++sweep) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vec2 xnew =
          cfg.row(i).transpose() + sigma * rng.gaussian_pair();
      const double u = rng.uniform_pos();
      ++proposals;
      const double dw = mcmc_delta_w(cfg, p, i, xnew);
      if (std::log(u) <= -0.5 * params.beta * dw) {
        cfg.row(i) = xnew.transpose();
        w += dw;
        ++accepted;
        if (++since_resync == 1000) {
          const double w_full = hamiltonian(cfg, p);
          run.stats.max_resync_drift =
              std::max(run.stats.max_resync_drift,
                       std::abs(w - w_full) / std::max(1.0, std::abs(w_full)));
          w = w_full;
          since_resync = 0;
        }
      }
    }
    if (sweep >= params.burn_in_sweeps &&
        (sweep - params.burn_in_sweeps) % params.thinning == 0) {
      run.samples.push_back(cfg);
      run.stats.w_series.push_back(w);
    }
  }
  run.stats.acceptance_rate =
      static_cast<double>(accepted) / static_cast<double>(proposals);
  if (run.stats.w_series.size() >= 100) {
    const ActEstimate est = chain_diagnostics(run.stats.w_series);
    run.stats.autocorrelation_time = est.act * params.thinning;
    run.stats.act_degenerate = est.degenerate;
  }
  return run;
}

Configuration ginibre_exact(int n, std::uint64_t seed) {
  if (n < 1) throw InvalidParamsError("ginibre: n must be >= 1");
  Rng rng(seed);
  const double sd = 1.0 / std::sqrt(2.0 * n);  // per real component
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Vec2 g = rng.gaussian_pair();
      m(i, j) = std::complex<double>(sd * g.x(), sd * g.y());
    }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
  if (solver.info() != Eigen::Success)
    throw NumericalError("ginibre: eigensolver failed to converge");
  Configuration cfg(n, 2);
  for (int i = 0; i < n; ++i) {
    cfg(i, 0) = solver.eigenvalues()[i].real();
    cfg(i, 1) = solver.eigenvalues()[i].imag();
  }
  return cfg;
}

ActEstimate chain_diagnostics(const std::vector<double>& series) {
  const std::size_t n = series.size();
  if (n < 100) throw InvalidParamsError("chain_diagnostics: series too short");
  double mean = 0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = series[i] - mean;

  auto gamma = [&](std::size_t k) {
    double s = 0;
    for (std::size_t i = 0; i + k < n; ++i) s += centered[i] * centered[i + k];
    return s / static_cast<double>(n);
  };

  const double g0 = gamma(0);
  ActEstimate est;
  if (g0 <= 0.0) {
    est.act = static_cast<double>(n);
    est.stderr_mean = 0.0;
    est.degenerate = true;
    return est;
  }
  // Geyer: sum pairs Gamma_m = gamma_{2m} + gamma_{2m+1} while positive,
  // capped to be non-increasing against estimation noise.
  double acc = -g0;
  double cap = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; 2 * m + 1 < n / 2; ++m) {
    double pair = gamma(2 * m) + gamma(2 * m + 1);
    if (pair <= 0.0) break;
    pair = std::min(pair, cap);
    cap = pair;
    acc += 2.0 * pair;
  }
  est.act = acc / g0;
  est.stderr_mean = std::sqrt(std::max(acc, 0.0) / static_cast<double>(n));
  return est;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw InvalidParamsError("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

}  // namespace coulomb
