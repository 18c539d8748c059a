#pragma once

#include <vector>

#include "coulomb/core.hpp"

namespace coulomb {

/// Flat torus R^2 / (Z u + Z v) carrying a point configuration.
/// The background-density-1 normalization used by the renormalized
/// energy requires |T| = n.
struct Torus {
  Vec2 u{1, 0};
  Vec2 v{0, 1};
  Configuration points;

  double volume() const { return std::abs(u.x() * v.y() - u.y() * v.x()); }

  /// Wraps x into the centered fundamental cell.
  Vec2 reduce(const Vec2& x) const;

  /// Unit-volume lattice of modular parameter tau = tau_re + i tau_im,
  /// one point at the origin: basis (1,0)/sqrt(y) and (x,y)/sqrt(y).
  static Torus from_modular(double tau_re, double tau_im);

  static Torus square() { return from_modular(0.0, 1.0); }
  static Torus triangular() { return from_modular(0.5, std::sqrt(3.0) / 2.0); }
};

/// Ewald tables for the Green function of one torus:
///   -Lap G = 2 pi (delta_0 - 1/|T|),  int_T G = 0.
/// Split with parameter alpha into a screened real-space sum of
/// exponential-integral images, a Gaussian-damped reciprocal sum, and
/// the exact constant -pi/(2 alpha |T|). Truncation radii are chosen so
/// each discarded tail is below tol/10.
class TorusGreen {
 public:
  TorusGreen(const Torus& torus, double tol, double alpha = 0.0);

  double operator()(const Vec2& x) const;

  /// lim_{x->0} G(x) + log|x|, from the same decomposition (the p = 0
  /// image supplies the log singularity analytically).
  double regularized_constant() const;

  double alpha() const { return alpha_; }
  double real_cutoff() const { return r_cut_; }
  double reciprocal_cutoff() const { return k_cut_; }
  double tol() const { return tol_; }

 private:
  Torus torus_;
  double tol_, alpha_, r_cut_, k_cut_, constant_;
  std::vector<Vec2> images_;      // lattice points within the enumeration radius
  std::vector<Vec2> kvecs_;       // half of the reciprocal shell (+k with cos)
  std::vector<double> kcoefs_;
};

double torus_green(const Torus& torus, const Vec2& x, double tol);
double green_regularized_constant(const Torus& torus, double tol);

struct WResult {
  double W = 0;
  double err = 0;       // tail-bound-based estimate
  double alpha = 0;
  double r_cut = 0;
  double k_cut = 0;
};

/// Renormalized energy of the periodic field of the torus points against
/// background density 1:
///   W = (pi/|T|) sum_{i != j} G(a_i - a_j) + pi lim_{x->0}(G(x)+log|x|).
/// Requires |T| = n.
WResult w_periodic(const Torus& torus, double tol);

/// Same formula at background density n/|T| (the regularized constant
/// enters once per point). Used by the rescaling route.
WResult w_periodic_density(const Torus& torus, double tol);

/// W after rescaling the configuration to background density m via
/// E -> sqrt(m) E(sqrt(m) .): direct Ewald on the scaled torus. Satisfies
/// w_scaled(T, m) = m (w_periodic(T) - (pi/2) log m).
WResult w_scaled(const Torus& torus, double m, double tol);

struct LatticeScanRow {
  double tau_re = 0;
  double tau_im = 0;
  double W = 0;
  double err = 0;
};

/// W over unit-volume lattices sampled in the modular fundamental domain
/// |Re tau| <= 1/2, |tau| >= 1. The grid is uniform in (Re tau, |tau|)
/// with |tau| in [1, 2], so the hexagonal corner exp(i pi/3) and the
/// square point i are exact grid nodes.
std::vector<LatticeScanRow> lattice_scan(int nx = 41, int ny = 41,
                                         double tol = 1e-8);

/// Index of the smallest W in a scan.
std::size_t scan_argmin(const std::vector<LatticeScanRow>& rows);

}  // namespace coulomb
