#pragma once

#include <vector>

#include "coulomb/core.hpp"

namespace coulomb {

enum class PotentialKind { Quadratic, RadialPolynomial, Grid };

struct PotentialEval {
  double value;
  Vec2 gradient;
  double laplacian;
};

/// Confining potential V. Three kinds:
///  - Quadratic: V = |x|^2.
///  - RadialPolynomial: V = sum_k a_k r^{2k}, k >= 1, a_k >= 0, at least
///    one a_k > 0.
///  - Grid: V sampled at the nodes of a uniform square grid; bilinear
///    interpolation off-node, central differences for derivatives.
///    Evaluation is restricted to the interior band where the difference
///    stencils exist.
class Potential {
 public:
  static Potential quadratic();
  /// coeffs[k-1] multiplies r^{2k}.
  static Potential radial_polynomial(std::vector<double> coeffs);
  /// values(i, j) = V(origin + (i*h, j*h)); square grids only.
  static Potential grid_sampled(Eigen::ArrayXXd values, Vec2 origin, double spacing);

  PotentialKind kind() const { return kind_; }
  bool radial() const { return kind_ != PotentialKind::Grid; }
  bool is_quadratic() const;

  double value(const Vec2& x) const;
  Vec2 gradient(const Vec2& x) const;
  double laplacian(const Vec2& x) const;
  PotentialEval evaluate(const Vec2& x) const;

  // Radial profile, valid for the radial kinds.
  double value_r(double r) const;
  double dvalue_r(double r) const;  // V'(r)
  double laplacian_r(double r) const;
  const std::vector<double>& coefficients() const { return coeffs_; }

  // Grid accessors.
  const Eigen::ArrayXXd& grid_values() const { return values_; }
  Vec2 grid_origin() const { return origin_; }
  double grid_spacing() const { return spacing_; }
  /// Closed interval bounds of the evaluable region.
  void grid_domain(Vec2& lo, Vec2& hi) const;

  /// Growth and admissibility proxy. Checks V/2 - log r strictly
  /// increasing over radii {10, 100, 1000} (radial kinds) and the
  /// coefficient sign constraints. Throws InvalidParamsError.
  void validate() const;

 private:
  Potential() = default;

  PotentialKind kind_ = PotentialKind::Quadratic;
  std::vector<double> coeffs_;  // RadialPolynomial

  Eigen::ArrayXXd values_;  // Grid: V at nodes
  Eigen::ArrayXXd gx_, gy_, lap_;
  Vec2 origin_{0, 0};
  double spacing_ = 0;

  double bilinear(const Eigen::ArrayXXd& a, const Vec2& x) const;
};

}  // namespace coulomb
