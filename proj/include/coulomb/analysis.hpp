#pragma once

#include <vector>

#include "coulomb/equilibrium.hpp"

namespace coulomb {

// Blown-up coordinates are x' = sqrt(n) x throughout: discrepancy centers,
// radii and windows live at the blown-up scale, the field operations at
// the original scale.

/// D(x', R) = #{i : |x_i - x0| <= R/sqrt(n)} - n mu0(B(x0, R/sqrt(n)))
/// with x0 = x0_blown / sqrt(n).
double discrepancy(const Configuration& cfg, const EquilibriumMeasure& em,
                   const Vec2& x0_blown, double R);

struct Rect {
  Vec2 lo{0, 0};
  Vec2 hi{0, 0};
  double width() const { return hi.x() - lo.x(); }
  double height() const { return hi.y() - lo.y(); }
  double area() const { return width() * height(); }
};

/// Midpoint-grid quadrature over a blown-up window of the deviation
/// integrand D(x',R)^2 / R^2 * min(1, |D(x',R)| / R^2).
double discrepancy_moment(const Configuration& cfg,
                          const EquilibriumMeasure& em, const Rect& window,
                          double R, double grid_step);

struct DiscrepancyField {
  std::vector<Vec2> centers;  // blown-up
  double R = 0;
  std::vector<double> values;
};

DiscrepancyField discrepancy_field(const Configuration& cfg,
                                   const EquilibriumMeasure& em,
                                   const Rect& window, double R,
                                   double grid_step);

/// The electric field E = -grad H_n at the original scale, where
/// H_n = -2 pi Lap^{-1}(nu_n - n mu0):
///   E(x) = sum_i (x - x_i)/|x - x_i|^2 + n grad U(x).
Vec2 electric_field(const Configuration& cfg, const EquilibriumMeasure& em,
                    const Vec2& x);

/// H_n(x) = sum_i -log|x - x_i| - n U(x); the potential whose negative
/// gradient electric_field returns.
double field_potential(const Configuration& cfg, const EquilibriumMeasure& em,
                       const Vec2& x);

/// (int_window |E|^q)^{1/q} on an offset midpoint grid that cannot land
/// on a particle; optional exclusion disks around the particles.
double field_Lq_norm(const Configuration& cfg, const EquilibriumMeasure& em,
                     const Rect& window, double q, double grid_step,
                     double exclusion = 0.0);

struct Psi6Result {
  std::vector<double> per_point;
  double bulk_mean = 0;      // points deeper than 3 mean spacings
  int bulk_count = 0;
  double mean_spacing = 0;   // mean nearest-neighbor distance
};

/// Six-fold bond-orientational order from the 6 nearest neighbors.
Psi6Result psi6(const Configuration& cfg, const EquilibriumMeasure& em,
                int k_neighbors = 6);

}  // namespace coulomb
