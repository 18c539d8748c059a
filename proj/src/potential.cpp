#include "coulomb/potential.hpp"

#include <cmath>

namespace coulomb {

Potential Potential::quadratic() {
  Potential p;
  p.kind_ = PotentialKind::Quadratic;
  p.coeffs_ = {1.0};
  return p;
}

Potential Potential::radial_polynomial(std::vector<double> coeffs) {
  Potential p;
  p.kind_ = PotentialKind::RadialPolynomial;
  p.coeffs_ = std::move(coeffs);
  if (p.coeffs_.empty())
    throw InvalidParamsError("radial_polynomial: empty coefficient list");
  bool positive = false;
  for (double a : p.coeffs_) {
    if (a < 0.0)
      throw InvalidParamsError("radial_polynomial: coefficients must be >= 0");
    if (a > 0.0) positive = true;
  }
  if (!positive)
    throw InvalidParamsError("radial_polynomial: needs a positive coefficient");
  return p;
}

Potential Potential::grid_sampled(Eigen::ArrayXXd values, Vec2 origin,
                                  double spacing) {
  if (values.rows() < 5 || values.cols() != values.rows())
    throw InvalidParamsError("grid_sampled: needs a square grid, >= 5 nodes per side");
  if (!(spacing > 0.0)) throw InvalidParamsError("grid_sampled: spacing must be > 0");
  Potential p;
  p.kind_ = PotentialKind::Grid;
  p.values_ = std::move(values);
  p.origin_ = origin;
  p.spacing_ = spacing;

  const Eigen::Index n = p.values_.rows();
  const double h = spacing;
  p.gx_ = Eigen::ArrayXXd::Zero(n, n);
  p.gy_ = Eigen::ArrayXXd::Zero(n, n);
  p.lap_ = Eigen::ArrayXXd::Zero(n, n);
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    for (Eigen::Index j = 1; j + 1 < n; ++j) {
      p.gx_(i, j) = (p.values_(i + 1, j) - p.values_(i - 1, j)) / (2 * h);
      p.gy_(i, j) = (p.values_(i, j + 1) - p.values_(i, j - 1)) / (2 * h);
      p.lap_(i, j) = (p.values_(i + 1, j) + p.values_(i - 1, j) +
                      p.values_(i, j + 1) + p.values_(i, j - 1) -
                      4 * p.values_(i, j)) /
                     (h * h);
    }
  }
  return p;
}

bool Potential::is_quadratic() const {
  if (kind_ == PotentialKind::Quadratic) return true;
  return kind_ == PotentialKind::RadialPolynomial && coeffs_.size() == 1 &&
         coeffs_[0] == 1.0;
}

double Potential::value_r(double r) const {
  const double r2 = r * r;
  double v = 0.0, p = 1.0;
  for (double a : coeffs_) {
    p *= r2;
    v += a * p;
  }
  return v;
}

double Potential::dvalue_r(double r) const {
  // V' = sum_k 2k a_k r^{2k-1}
  const double r2 = r * r;
  double v = 0.0, p = 1.0;  // p = r^{2k-1} built incrementally
  for (std::size_t k = 1; k <= coeffs_.size(); ++k) {
    p *= (k == 1) ? r : r2;
    v += 2.0 * static_cast<double>(k) * coeffs_[k - 1] * p;
  }
  return v;
}

double Potential::laplacian_r(double r) const {
  // Laplacian of r^{2k} is 4 k^2 r^{2k-2}
  const double r2 = r * r;
  double v = 0.0, p = 1.0;
  for (std::size_t k = 1; k <= coeffs_.size(); ++k) {
    v += 4.0 * static_cast<double>(k * k) * coeffs_[k - 1] * p;
    p *= r2;
  }
  return v;
}

void Potential::grid_domain(Vec2& lo, Vec2& hi) const {
  const double h = spacing_;
  lo = origin_ + Vec2(h, h);
  hi = origin_ + h * static_cast<double>(values_.rows() - 2) * Vec2(1, 1);
}

double Potential::bilinear(const Eigen::ArrayXXd& a, const Vec2& x) const {
  const double fx = (x.x() - origin_.x()) / spacing_;
  const double fy = (x.y() - origin_.y()) / spacing_;
  const Eigen::Index n = a.rows();
  Eigen::Index i = static_cast<Eigen::Index>(std::floor(fx));
  Eigen::Index j = static_cast<Eigen::Index>(std::floor(fy));
  if (i < 1 || j < 1 || i + 2 > n - 1 || j + 2 > n - 1) {
    // allow the top edge of the evaluable band exactly
    if (i == n - 2 && fx == static_cast<double>(i)) --i;
    if (j == n - 2 && fy == static_cast<double>(j)) --j;
    if (i < 1 || j < 1 || i + 2 > n - 1 || j + 2 > n - 1)
      throw DomainError("grid potential: point outside sampled domain");
  }
  const double tx = fx - static_cast<double>(i);
  const double ty = fy - static_cast<double>(j);
  return (1 - tx) * (1 - ty) * a(i, j) + tx * (1 - ty) * a(i + 1, j) +
         (1 - tx) * ty * a(i, j + 1) + tx * ty * a(i + 1, j + 1);
}

double Potential::value(const Vec2& x) const {
  if (!x.allFinite()) throw DomainError("potential: non-finite point");
  if (kind_ == PotentialKind::Grid) return bilinear(values_, x);
  return value_r(x.norm());
}

Vec2 Potential::gradient(const Vec2& x) const {
  if (!x.allFinite()) throw DomainError("potential: non-finite point");
  if (kind_ == PotentialKind::Grid) return {bilinear(gx_, x), bilinear(gy_, x)};
  // grad V = (sum_k 2k a_k r^{2k-2}) x, finite at the origin
  const double r2 = x.squaredNorm();
  double s = 0.0, p = 1.0;
  for (std::size_t k = 1; k <= coeffs_.size(); ++k) {
    s += 2.0 * static_cast<double>(k) * coeffs_[k - 1] * p;
    p *= r2;
  }
  return s * x;
}

double Potential::laplacian(const Vec2& x) const {
  if (!x.allFinite()) throw DomainError("potential: non-finite point");
  if (kind_ == PotentialKind::Grid) return bilinear(lap_, x);
  return laplacian_r(x.norm());
}

PotentialEval Potential::evaluate(const Vec2& x) const {
  return {value(x), gradient(x), laplacian(x)};
}

void Potential::validate() const {
  if (kind_ == PotentialKind::Grid) {
    if (lap_.block(1, 1, values_.rows() - 2, values_.cols() - 2).minCoeff() <
        0.0)
      throw InvalidParamsError("grid potential: negative Laplacian in domain");
    return;
  }
  double prev = -std::numeric_limits<double>::infinity();
  for (double r : {10.0, 100.0, 1000.0}) {
    const double g = 0.5 * value_r(r) - std::log(r);
    if (!(g > prev))
      throw InvalidParamsError("potential: V/2 - log|x| not increasing at large radii");
    prev = g;
  }
}

}  // namespace coulomb
