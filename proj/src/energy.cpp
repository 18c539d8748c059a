#include "coulomb/energy.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "coulomb/quadrature.hpp"

namespace coulomb {

namespace {
constexpr Eigen::Index kBlock = 64;

void require_distinct(const Configuration& cfg) {
  const Eigen::Index n = cfg.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if ((cfg.row(i) - cfg.row(j)).squaredNorm() == 0.0)
        throw SingularConfigurationError("coincident points");
}
}  // namespace

double min_pair_distance(const Configuration& cfg) {
  const Eigen::Index n = cfg.rows();
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      best = std::min(best, (cfg.row(i) - cfg.row(j)).norm());
  return best;
}

double pair_energy(const Configuration& cfg) {
  require_distinct(cfg);
  const Eigen::Index n = cfg.rows();
  const Eigen::Index nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(static_cast<std::size_t>(std::max<Eigen::Index>(nblocks, 1)), 0.0);
  parallel_for_blocked(n, kBlock, [&](Eigen::Index i0, Eigen::Index i1) {
    KahanSum local;
    for (Eigen::Index i = i0; i < i1; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j)
        local.add(std::log((cfg.row(i) - cfg.row(j)).squaredNorm()));
    partial[static_cast<std::size_t>(i0 / kBlock)] = local.value();
  });
  KahanSum total;
  for (double v : partial) total.add(v);
  // sum over ordered pairs of log|.| equals the ordered sum of log|.|^2 / 2,
  // i.e. the unordered sum of log|.|^2
  return -total.value();
}

double hamiltonian(const Configuration& cfg, const Potential& p) {
  const Eigen::Index n = cfg.rows();
  KahanSum pot;
  for (Eigen::Index i = 0; i < n; ++i) pot.add(p.value(cfg.row(i).transpose()));
  return pair_energy(cfg) + static_cast<double>(n) * pot.value();
}

Configuration grad_hamiltonian(const Configuration& cfg, const Potential& p) {
  require_distinct(cfg);
  const Eigen::Index n = cfg.rows();
  Configuration g(n, 2);
  parallel_for_blocked(n, kBlock, [&](Eigen::Index i0, Eigen::Index i1) {
    for (Eigen::Index i = i0; i < i1; ++i) {
      Vec2 acc = static_cast<double>(n) * p.gradient(cfg.row(i).transpose());
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        const Vec2 d = (cfg.row(i) - cfg.row(j)).transpose();
        acc -= 2.0 * d / d.squaredNorm();
      }
      g.row(i) = acc.transpose();
    }
  });
  return g;
}

double energy_functional_I(const EquilibriumMeasure& em) {
  if (em.radial()) {
    const double R = em.support_radius();
    auto ring = [&](double r) { return 2.0 * M_PI * r * em.density_r(r); };
    const double L0 =
        integrate([&](double r) { return em.log_potential_r(r) * ring(r); },
                  0.0, R, 1e-12)
            .value;
    const double intV =
        integrate(
            [&](double r) { return em.potential().value_r(r) * ring(r); }, 0.0,
            R, 1e-12)
            .value;
    return L0 + intV;
  }
  return em.I0();
}

EnergyReport splitting_report(const Configuration& cfg,
                              const EquilibriumMeasure& em) {
  const Eigen::Index n = cfg.rows();
  const double nn = static_cast<double>(n);
  EnergyReport rep;
  rep.w_n = hamiltonian(cfg, em.potential());

  // Path A: subtract the macroscopic and logarithmic orders.
  rep.F_n_splitting =
      (rep.w_n - nn * nn * em.I0() + 0.5 * nn * std::log(nn)) / nn;

  // Path B: the renormalized field energy of grad H'_n, expanded into
  // pair, cross and self terms, in the original scale:
  //   W(grad H_n, 1)/pi = sum_{i!=j} -log|x_i-x_j|
  //                       - 2 n sum_i U(x_i) + n^2 L0,
  // then W(grad H'_n, 1) = W(grad H_n, 1) + (pi/2) n log n.
  KahanSum usum, zsum;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec2 xi = cfg.row(i).transpose();
    usum.add(em.log_potential(xi));
    zsum.add(em.zeta(xi));
  }
  const double w_field_over_pi =
      pair_energy(cfg) - 2.0 * nn * usum.value() + nn * nn * em.L0();
  const double w_blown_over_pi = w_field_over_pi + 0.5 * nn * std::log(nn);
  rep.F_hat_n = w_blown_over_pi / nn;
  rep.zeta_sum = zsum.value();
  rep.F_n_direct = rep.F_hat_n + 2.0 * rep.zeta_sum;
  rep.residual = std::abs(rep.F_n_splitting - rep.F_n_direct);
  return rep;
}

namespace {

double hamiltonian_nothrow(const Configuration& cfg, const Potential& p) {
  if (min_pair_distance(cfg) == 0.0)
    return std::numeric_limits<double>::infinity();
  return hamiltonian(cfg, p);
}

FeketeResult descend(const Configuration& start, const EquilibriumMeasure& em,
                     const FeketeOptions& opts, double grad_tol) {
  const Potential& p = em.potential();
  FeketeResult res;
  res.points = start;
  res.w = hamiltonian(start, p);

  Configuration x = start;
  double w = res.w;
  Configuration g = grad_hamiltonian(x, p);
  Configuration dir = -g;
  double step = 1.0 / std::max(1.0, g.cwiseAbs().maxCoeff());
  int iter = 0;
  int no_progress = 0;
  for (; iter < opts.max_iters; ++iter) {
    const double gnorm = g.cwiseAbs().maxCoeff();
    if (gnorm < grad_tol) {
      res.status = FeketeStatus::Converged;
      break;
    }
    if (no_progress > 20) {  // w is pinned at its rounding floor
      res.status = FeketeStatus::Stagnated;
      break;
    }
    double descent = -(dir.array() * g.array()).sum();
    if (descent <= 0.0) {  // restart on a non-descent direction
      dir = -g;
      descent = g.squaredNorm();
    }

    // Armijo backtracking.
    double t = step;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Configuration xt = x + t * dir;
      const double wt = hamiltonian_nothrow(xt, p);
      if (wt <= w - 1e-4 * t * descent) {
        if (w - wt <= 1e-15 * std::max(1.0, std::abs(w)))
          ++no_progress;
        else
          no_progress = 0;
        const Configuration gnew = grad_hamiltonian(xt, p);
        // Polak-Ribiere update with automatic restart.
        double beta = 0.0;
        if (opts.conjugate) {
          const double denom = g.squaredNorm();
          beta = std::max(
              0.0, ((gnew.array() * (gnew - g).array()).sum()) / denom);
        }
        dir = -gnew + beta * dir;
        x = xt;
        w = wt;
        g = gnew;
        step = std::min(t * 2.0, 1e6);
        accepted = true;
        if (opts.on_accept) opts.on_accept(iter, w);
        break;
      }
      t *= 0.5;
      if (t < 1e-16) break;
    }
    if (!accepted) {
      res.status = FeketeStatus::Stagnated;
      break;
    }
  }
  if (iter == opts.max_iters) res.status = FeketeStatus::MaxIterations;

  // Near a nondegenerate minimum the energy decrease per step falls under
  // the rounding floor of w long before the gradient target is met; finish
  // with plain gradient steps accepted on gradient contraction instead.
  if (g.cwiseAbs().maxCoeff() >= grad_tol) {
    const Configuration x_before = x;
    double t = std::min(std::max(step, 1e-12), 1.0);
    double g2 = g.squaredNorm();
    int stale = 0;
    while (g.cwiseAbs().maxCoeff() >= grad_tol &&
           iter < opts.max_iters + 2000 && stale < 300) {
      ++iter;
      const Configuration xt = x - t * g;
      if (min_pair_distance(xt) == 0.0) break;
      const Configuration gt = grad_hamiltonian(xt, p);
      const double gt2 = gt.squaredNorm();
      if (gt2 < g2) {
        x = xt;
        g = gt;
        g2 = gt2;
        t *= 1.25;
        stale = 0;
      } else {
        t *= 0.5;
        ++stale;
        if (t < 1e-18) break;
      }
    }
    const double gnorm = g.cwiseAbs().maxCoeff();
    const double w_pol = hamiltonian_nothrow(x, p);
    if (w_pol <= w + 1e-12 * std::max(1.0, std::abs(w))) {
      w = std::min(w, w_pol);
      if (gnorm < grad_tol) res.status = FeketeStatus::Converged;
    } else {
      // roll back; the polish drifted upward in energy
      x = x_before;
    }
  }

  res.points = x;
  res.w = w;
  res.grad_norm_inf = grad_hamiltonian(x, p).cwiseAbs().maxCoeff();
  res.iterations = iter;
  return res;
}

}  // namespace

FeketeResult minimize_fekete(const Configuration& cfg0,
                             const EquilibriumMeasure& em,
                             const FeketeOptions& opts) {
  require_distinct(cfg0);
  const Eigen::Index n = cfg0.rows();
  const double grad_tol =
      (opts.grad_tol > 0.0) ? opts.grad_tol : 1e-8 * static_cast<double>(n);

  // Start 0 descends the supplied configuration, the rest descend
  // independent mu0 draws. Starts run as parallel tasks; the winner is
  // picked in index order, so the result does not depend on the worker
  // count.
  const int starts = std::max(1, opts.multistarts);
  std::vector<FeketeResult> results(static_cast<std::size_t>(starts));
  parallel_for_blocked(starts, 1, [&](Eigen::Index s0, Eigen::Index s1) {
    for (Eigen::Index s = s0; s < s1; ++s) {
      if (s == 0) {
        results[0] = descend(cfg0, em, opts, grad_tol);
        results[0].best_start = -1;
        continue;
      }
      Rng rng(opts.seed, static_cast<std::uint64_t>(s));
      const Configuration init = em.sample_configuration(n, rng);
      if (min_pair_distance(init) == 0.0) continue;
      results[static_cast<std::size_t>(s)] = descend(init, em, opts, grad_tol);
      results[static_cast<std::size_t>(s)].best_start = static_cast<int>(s);
    }
  });
  std::size_t best = 0;
  for (std::size_t s = 1; s < results.size(); ++s) {
    if (results[s].points.rows() == 0) continue;
    if (results[s].w < results[best].w) best = s;
  }
  return results[best];
}

}  // namespace coulomb
