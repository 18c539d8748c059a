#pragma once

#include <vector>

#include "coulomb/potential.hpp"
#include "coulomb/rng.hpp"

namespace coulomb {

struct ObstacleGridOptions {
  double half_width = 2.0;       // box [-half_width, half_width]^2
  double cell = 1.0 / 64;        // grid spacing
  double omega = 1.9;            // PSOR relaxation
  double psor_tol = 1e-10;       // max nodal update at convergence
  int max_sweeps = 200000;
  double inner_tol = 1e-6;       // looser tolerance inside the c search
  double c_bracket = 8.0;        // initial |c| bracket half-width
};

/// Equilibrium measure of a confining potential: support, density
/// m0 = Lap(V)/(4 pi) on the support, log-potential U, the constant c
/// with U + V/2 = c on the support, and the energy scalars
/// L0 = -int int log|x-y| dmu dmu and I0 = L0 + int V dmu.
///
/// Radial potentials get the support radius from R V'(R) = 2; grid
/// construction solves the discrete obstacle problem for U by projected
/// SOR with an outer search for c enforcing unit mass.
///
/// Immutable after construction; safe to share across threads.
class EquilibriumMeasure {
 public:
  static EquilibriumMeasure solve_radial(const Potential& p);
  static EquilibriumMeasure solve_grid(const Potential& p,
                                       const ObstacleGridOptions& opt = {});

  bool radial() const { return radial_; }
  const Potential& potential() const { return pot_; }

  /// Support radius. Radial: the solved R*. Grid: area-equivalent radius
  /// sqrt(|coincidence set| / pi).
  double support_radius() const { return R_; }

  double c() const { return c_; }
  double I0() const { return I0_; }
  double L0() const { return L0_; }
  double density_lower() const { return m_lo_; }
  double density_upper() const { return m_hi_; }

  double density(const Vec2& x) const;
  double density_r(double r) const;  // radial kinds

  /// U(x) = -int log|x-y| dmu(y).
  double log_potential(const Vec2& x) const;
  double log_potential_r(double r) const;
  Vec2 grad_log_potential(const Vec2& x) const;

  /// zeta = U + V/2 - c, clamped to zero against rounding; >= 0.
  double zeta(const Vec2& x) const;

  /// mu0(B(center, rho)).
  double mass_in_disk(const Vec2& center, double rho) const;

  /// mu0(B_r) about the origin (radial kinds); closed form r V'(r)/2.
  double cumulative_mass_r(double r) const;

  bool in_support(const Vec2& x) const;
  double dist_to_support(const Vec2& x) const;       // 0 inside
  double depth_in_support(const Vec2& x) const;      // distance to the boundary, <0 outside

  /// int m0 log m0 over the support; the optional out-parameter receives
  /// the quadrature error estimate (0 for grid measures).
  double entropy_integral(double* quadrature_error = nullptr) const;

  double max_density() const { return m_hi_; }

  /// One draw from mu0 by rejection against the density bound.
  Vec2 sample(Rng& rng) const;
  Configuration sample_configuration(Eigen::Index n, Rng& rng) const;

  // Grid accessors (serialization, inspection).
  const Eigen::ArrayXXd& grid_u() const { return u_; }
  const Eigen::ArrayXXd& grid_density() const { return m0_; }
  const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& grid_contact() const {
    return contact_;
  }
  Vec2 grid_origin() const { return gorigin_; }
  double grid_spacing() const { return gh_; }

 private:
  EquilibriumMeasure() : pot_(Potential::quadratic()) {}

  bool radial_ = true;
  Potential pot_;
  double R_ = 0, c_ = 0, I0_ = 0, L0_ = 0;
  double m_lo_ = 0, m_hi_ = 0;

  // grid state
  Eigen::ArrayXXd u_, m0_;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> contact_;
  Vec2 gorigin_{0, 0};
  double gh_ = 0;
  std::vector<Vec2> contact_rim_;  // contact nodes with a non-contact neighbor

  double grid_bilinear(const Eigen::ArrayXXd& a, const Vec2& x) const;
};

}  // namespace coulomb
