#include "coulomb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace coulomb {

double discrepancy(const Configuration& cfg, const EquilibriumMeasure& em,
                   const Vec2& x0_blown, double R) {
  if (!(R > 0)) throw InvalidParamsError("discrepancy: R must be > 0");
  const double n = static_cast<double>(cfg.rows());
  const double root_n = std::sqrt(n);
  const Vec2 x0 = x0_blown / root_n;
  const double rho = R / root_n;
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < cfg.rows(); ++i)
    if ((cfg.row(i).transpose() - x0).norm() <= rho) ++count;
  return static_cast<double>(count) - n * em.mass_in_disk(x0, rho);
}

DiscrepancyField discrepancy_field(const Configuration& cfg,
                                   const EquilibriumMeasure& em,
                                   const Rect& window, double R,
                                   double grid_step) {
  DiscrepancyField field;
  field.R = R;
  const int nx = std::max(1, static_cast<int>(std::floor(window.width() / grid_step)));
  const int ny = std::max(1, static_cast<int>(std::floor(window.height() / grid_step)));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Vec2 c = window.lo + grid_step * Vec2(i + 0.5, j + 0.5);
      field.centers.push_back(c);
      field.values.push_back(discrepancy(cfg, em, c, R));
    }
  return field;
}

double discrepancy_moment(const Configuration& cfg,
                          const EquilibriumMeasure& em, const Rect& window,
                          double R, double grid_step) {
  const DiscrepancyField f = discrepancy_field(cfg, em, window, R, grid_step);
  const double R2 = R * R;
  double acc = 0.0;
  for (double d : f.values)
    acc += (d * d / R2) * std::min(1.0, std::abs(d) / R2);
  return acc * grid_step * grid_step;
}

Vec2 electric_field(const Configuration& cfg, const EquilibriumMeasure& em,
                    const Vec2& x) {
  const double n = static_cast<double>(cfg.rows());
  Vec2 e = n * em.grad_log_potential(x);
  for (Eigen::Index i = 0; i < cfg.rows(); ++i) {
    const Vec2 d = x - cfg.row(i).transpose();
    const double d2 = d.squaredNorm();
    if (d2 == 0.0)
      throw DomainError("electric_field: x coincides with a particle");
    e += d / d2;
  }
  return e;
}

double field_potential(const Configuration& cfg, const EquilibriumMeasure& em,
                       const Vec2& x) {
  const double n = static_cast<double>(cfg.rows());
  double h = -n * em.log_potential(x);
  for (Eigen::Index i = 0; i < cfg.rows(); ++i) {
    const double d = (x - cfg.row(i).transpose()).norm();
    if (d == 0.0)
      throw DomainError("field_potential: x coincides with a particle");
    h -= std::log(d);
  }
  return h;
}

double field_Lq_norm(const Configuration& cfg, const EquilibriumMeasure& em,
                     const Rect& window, double q, double grid_step,
                     double exclusion) {
  if (!(q > 1.0 && q < 2.0))
    throw InvalidParamsError("field_Lq_norm: q must lie in (1,2)");
  const int nx = std::max(1, static_cast<int>(std::floor(window.width() / grid_step)));
  const int ny = std::max(1, static_cast<int>(std::floor(window.height() / grid_step)));
  const double excl2 = exclusion * exclusion;
  double acc = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Vec2 c = window.lo + grid_step * Vec2(i + 0.5, j + 0.5);
      double d2min = std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k < cfg.rows(); ++k)
        d2min = std::min(d2min, (c - cfg.row(k).transpose()).squaredNorm());
      if (d2min <= excl2 || d2min < 1e-24) continue;  // skip singular nodes
      acc += std::pow(electric_field(cfg, em, c).norm(), q);
    }
  return std::pow(acc * grid_step * grid_step, 1.0 / q);
}

Psi6Result psi6(const Configuration& cfg, const EquilibriumMeasure& em,
                int k_neighbors) {
  const Eigen::Index n = cfg.rows();
  if (n < 8) throw InvalidParamsError("psi6: needs at least 8 points");
  Psi6Result res;
  res.per_point.resize(static_cast<std::size_t>(n));

  std::vector<double> nearest(static_cast<std::size_t>(n));
  std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j)
      dist[static_cast<std::size_t>(j)] = {
          (cfg.row(i) - cfg.row(j)).squaredNorm(), j};
    dist[static_cast<std::size_t>(i)].first =
        std::numeric_limits<double>::infinity();
    const int k = std::min<int>(k_neighbors, static_cast<int>(n) - 1);
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    std::complex<double> acc(0, 0);
    for (int m = 0; m < k; ++m) {
      const Vec2 d =
          (cfg.row(dist[static_cast<std::size_t>(m)].second) - cfg.row(i))
              .transpose();
      const double theta = std::atan2(d.y(), d.x());
      acc += std::exp(std::complex<double>(0.0, 6.0 * theta));
    }
    res.per_point[static_cast<std::size_t>(i)] = std::abs(acc) / k;
    nearest[static_cast<std::size_t>(i)] = std::sqrt(dist[0].first);
  }

  double spacing = 0.0;
  for (double d : nearest) spacing += d;
  spacing /= static_cast<double>(n);
  res.mean_spacing = spacing;

  double bulk_acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (em.depth_in_support(cfg.row(i).transpose()) > 3.0 * spacing) {
      bulk_acc += res.per_point[static_cast<std::size_t>(i)];
      ++res.bulk_count;
    }
  }
  res.bulk_mean = (res.bulk_count > 0) ? bulk_acc / res.bulk_count : 0.0;
  return res;
}

}  // namespace coulomb
