#include "coulomb/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coulomb/quadrature.hpp"

namespace coulomb {

namespace {

// Intersection area of B(0, r1) and a disk of radius r2 at distance d.
double lens_area(double r1, double r2, double d) {
  if (d >= r1 + r2) return 0.0;
  if (d <= std::abs(r1 - r2)) {
    const double r = std::min(r1, r2);
    return M_PI * r * r;
  }
  auto clamp1 = [](double t) { return std::min(1.0, std::max(-1.0, t)); };
  const double a1 = std::acos(clamp1((d * d + r1 * r1 - r2 * r2) / (2 * d * r1)));
  const double a2 = std::acos(clamp1((d * d + r2 * r2 - r1 * r1) / (2 * d * r2)));
  const double s = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
  return r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * std::sqrt(std::max(0.0, s));
}

}  // namespace

EquilibriumMeasure EquilibriumMeasure::solve_radial(const Potential& p) {
  if (!p.radial())
    throw InvalidParamsError("solve_radial: potential is not radial");
  p.validate();

  // Unit mass of m0 = Lap(V)/4pi on B_R is equivalent to R V'(R) = 2
  // by the divergence theorem.
  auto f = [&p](double r) { return r * p.dvalue_r(r) - 2.0; };
  double lo = 1e-6, hi = 1e6;
  if (!(f(lo) < 0.0 && f(hi) > 0.0))
    throw NoSupportError("solve_radial: R V'(R) = 2 has no root in [1e-6, 1e6]");
  while (hi - lo > 1e-12 * std::max(1.0, lo)) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }

  EquilibriumMeasure em;
  em.radial_ = true;
  em.pot_ = p;
  em.R_ = 0.5 * (lo + hi);
  em.c_ = -std::log(em.R_) + 0.5 * p.value_r(em.R_);

  // Density bounds over the support.
  em.m_lo_ = std::numeric_limits<double>::infinity();
  em.m_hi_ = 0.0;
  const int ns = 4096;
  for (int i = 0; i <= ns; ++i) {
    const double m = p.laplacian_r(em.R_ * i / ns) / (4.0 * M_PI);
    if (m < 0.0)
      throw InvalidParamsError("solve_radial: negative density on the support");
    em.m_lo_ = std::min(em.m_lo_, m);
    em.m_hi_ = std::max(em.m_hi_, m);
  }

  // L0 = int U dmu, int V dmu by quadrature; I0 = L0 + int V dmu.
  const double R = em.R_;
  auto ring = [&](double r) { return 2.0 * M_PI * r * em.density_r(r); };
  const double intV =
      integrate([&](double r) { return p.value_r(r) * ring(r); }, 0.0, R, 1e-12)
          .value;
  const double L0 =
      integrate([&](double r) { return em.log_potential_r(r) * ring(r); }, 0.0,
                R, 1e-12)
          .value;
  em.L0_ = L0;
  em.I0_ = L0 + intV;
  return em;
}

double EquilibriumMeasure::density_r(double r) const {
  if (!radial_) throw InvalidParamsError("density_r: grid measure");
  if (r > R_) return 0.0;
  return pot_.laplacian_r(r) / (4.0 * M_PI);
}

double EquilibriumMeasure::cumulative_mass_r(double r) const {
  if (!radial_) throw InvalidParamsError("cumulative_mass_r: grid measure");
  if (r >= R_) return 1.0;
  return 0.5 * r * pot_.dvalue_r(r);
}

double EquilibriumMeasure::log_potential_r(double r) const {
  if (!radial_) throw InvalidParamsError("log_potential_r: grid measure");
  if (r >= R_) return -std::log(r);
  if (pot_.is_quadratic()) return 0.5 * (1.0 - r * r);
  // Shell formula: U(r) = -log r * mu(B_r) - int_{s>r} log s dmu(s).
  const double head = (r == 0.0) ? 0.0 : -std::log(r) * cumulative_mass_r(r);
  const double tail =
      integrate(
          [&](double s) {
            return std::log(s) * 2.0 * M_PI * s * density_r(s);
          },
          r, R_, 1e-13)
          .value;
  return head - tail;
}

double EquilibriumMeasure::density(const Vec2& x) const {
  if (radial_) return density_r(x.norm());
  if (!in_support(x)) return 0.0;
  return grid_bilinear(m0_, x);
}

double EquilibriumMeasure::log_potential(const Vec2& x) const {
  if (radial_) return log_potential_r(x.norm());
  const Vec2 rel = x - gorigin_;
  const double lim = gh_ * static_cast<double>(u_.rows() - 1);
  if (rel.x() < 0 || rel.y() < 0 || rel.x() > lim || rel.y() > lim)
    return -std::log(x.norm());  // all mass is inside the box
  return grid_bilinear(u_, x);
}

Vec2 EquilibriumMeasure::grad_log_potential(const Vec2& x) const {
  if (radial_) {
    const double r = x.norm();
    if (r == 0.0) return {0.0, 0.0};
    // U'(r) = -mu(B_r)/r
    return -(cumulative_mass_r(r) / (r * r)) * x;
  }
  const double h = gh_;
  const double ux = (log_potential(x + Vec2(h, 0)) - log_potential(x - Vec2(h, 0))) / (2 * h);
  const double uy = (log_potential(x + Vec2(0, h)) - log_potential(x - Vec2(0, h))) / (2 * h);
  return {ux, uy};
}

double EquilibriumMeasure::zeta(const Vec2& x) const {
  double z = log_potential(x) + 0.5 * pot_.value(x) - c_;
  if (z < 0.0 && z > -1e-10) z = 0.0;
  return z;
}

double EquilibriumMeasure::mass_in_disk(const Vec2& center, double rho) const {
  if (rho <= 0.0) return 0.0;
  if (radial_) {
    const double d = center.norm();
    if (pot_.is_quadratic())
      return lens_area(R_, rho, d) / (M_PI * R_ * R_);
    if (d < 1e-14) return cumulative_mass_r(std::min(rho, R_));
    if (d - rho >= R_) return 0.0;
    // Mass on circles of radius s weighted by the angular width inside
    // the disk; kinks where the circles become tangent.
    auto angular = [&](double s) -> double {
      if (s + d <= rho) return 2.0 * M_PI;
      if (std::abs(d - s) >= rho) return 0.0;
      const double t = (d * d + s * s - rho * rho) / (2.0 * d * s);
      return 2.0 * std::acos(std::min(1.0, std::max(-1.0, t)));
    };
    return integrate_split(
               [&](double s) { return density_r(s) * s * angular(s); }, 0.0,
               R_, {std::abs(d - rho), d + rho}, 1e-12)
        .value;
  }
  // Grid: nodes carry h^2 of mass each.
  double mass = 0.0;
  const Eigen::Index n = m0_.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (contact_(i, j)) {
        const Vec2 xi = gorigin_ + gh_ * Vec2(static_cast<double>(i), static_cast<double>(j));
        if ((xi - center).norm() <= rho) mass += m0_(i, j) * gh_ * gh_;
      }
  return mass;
}

bool EquilibriumMeasure::in_support(const Vec2& x) const {
  if (radial_) return x.norm() <= R_;
  const Vec2 rel = (x - gorigin_) / gh_;
  const Eigen::Index i = static_cast<Eigen::Index>(std::lround(rel.x()));
  const Eigen::Index j = static_cast<Eigen::Index>(std::lround(rel.y()));
  if (i < 0 || j < 0 || i >= contact_.rows() || j >= contact_.cols()) return false;
  return contact_(i, j);
}

double EquilibriumMeasure::dist_to_support(const Vec2& x) const {
  return std::max(0.0, -depth_in_support(x));
}

double EquilibriumMeasure::depth_in_support(const Vec2& x) const {
  if (radial_) return R_ - x.norm();
  double best = std::numeric_limits<double>::infinity();
  for (const Vec2& r : contact_rim_) best = std::min(best, (x - r).norm());
  return in_support(x) ? best : -best;
}

double EquilibriumMeasure::entropy_integral(double* quadrature_error) const {
  if (quadrature_error) *quadrature_error = 0.0;
  if (radial_) {
    const QuadratureResult q = integrate(
        [&](double r) {
          const double m = density_r(r);
          return (m > 0.0) ? 2.0 * M_PI * r * m * std::log(m) : 0.0;
        },
        0.0, R_, 1e-12);
    if (quadrature_error) *quadrature_error = q.error;
    return q.value;
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i < m0_.rows(); ++i)
    for (Eigen::Index j = 0; j < m0_.cols(); ++j)
      if (contact_(i, j) && m0_(i, j) > 0.0)
        s += m0_(i, j) * std::log(m0_(i, j)) * gh_ * gh_;
  return s;
}

Vec2 EquilibriumMeasure::sample(Rng& rng) const {
  const double bound = m_hi_ * (1.0 + 1e-12);
  Vec2 lo, hi;
  if (radial_) {
    lo = {-R_, -R_};
    hi = {R_, R_};
  } else {
    lo = gorigin_;
    hi = gorigin_ + gh_ * static_cast<double>(m0_.rows() - 1) * Vec2(1, 1);
  }
  for (int tries = 0; tries < 1000000; ++tries) {
    const Vec2 x(lo.x() + (hi.x() - lo.x()) * rng.uniform(),
                 lo.y() + (hi.y() - lo.y()) * rng.uniform());
    if (rng.uniform() * bound <= density(x)) return x;
  }
  throw NumericalError("sample: rejection sampling failed to accept");
}

Configuration EquilibriumMeasure::sample_configuration(Eigen::Index n,
                                                       Rng& rng) const {
  Configuration cfg(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) cfg.row(i) = sample(rng).transpose();
  return cfg;
}

double EquilibriumMeasure::grid_bilinear(const Eigen::ArrayXXd& a,
                                         const Vec2& x) const {
  const double fx = (x.x() - gorigin_.x()) / gh_;
  const double fy = (x.y() - gorigin_.y()) / gh_;
  const Eigen::Index n = a.rows();
  Eigen::Index i = std::min<Eigen::Index>(
      std::max<Eigen::Index>(0, static_cast<Eigen::Index>(std::floor(fx))), n - 2);
  Eigen::Index j = std::min<Eigen::Index>(
      std::max<Eigen::Index>(0, static_cast<Eigen::Index>(std::floor(fy))), n - 2);
  const double tx = std::min(1.0, std::max(0.0, fx - static_cast<double>(i)));
  const double ty = std::min(1.0, std::max(0.0, fy - static_cast<double>(j)));
  return (1 - tx) * (1 - ty) * a(i, j) + tx * (1 - ty) * a(i + 1, j) +
         (1 - tx) * ty * a(i, j + 1) + tx * ty * a(i + 1, j + 1);
}

// ---------------------------------------------------------------------------
// Obstacle-problem construction.

namespace {

struct ObstacleState {
  Eigen::ArrayXXd u;
  Eigen::ArrayXXd psi_base;  // -V/2; the obstacle is c + psi_base
  Eigen::ArrayXXd lap_scaled;  // Lap(V)/(4 pi) at nodes
  Eigen::Index n = 0;
  double h = 0;
};

// One PSOR pass; returns the largest nodal update. Sweeps column by
// column so the inner index follows the storage order.
double psor_sweep(ObstacleState& st, double c, double omega) {
  double max_update = 0.0;
  const Eigen::Index n = st.n;
  double* u = st.u.data();
  const double* psi = st.psi_base.data();
  for (Eigen::Index j = 1; j + 1 < n; ++j) {
    const Eigen::Index col = j * n;
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
      const Eigen::Index idx = col + i;
      const double old = u[idx];
      const double gs =
          0.25 * (u[idx - 1] + u[idx + 1] + u[idx - n] + u[idx + n]);
      double unew = old + omega * (gs - old);
      const double obstacle = c + psi[idx];
      if (unew < obstacle) unew = obstacle;
      max_update = std::max(max_update, std::abs(unew - old));
      u[idx] = unew;
    }
  }
  return max_update;
}

int psor_solve(ObstacleState& st, double c, double omega, double tol,
               int max_sweeps) {
  int sweeps = 0;
  while (sweeps < max_sweeps) {
    ++sweeps;
    if (psor_sweep(st, c, omega) < tol) return sweeps;
  }
  throw ConvergenceError("obstacle solver: PSOR did not converge");
}

double contact_mass(const ObstacleState& st, double c,
                    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>* mask) {
  const Eigen::Index n = st.n;
  if (mask) *mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, false);
  double mass = 0.0;
  for (Eigen::Index j = 1; j + 1 < n; ++j)
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
      const double gap = st.u(i, j) - (c + st.psi_base(i, j));
      if (gap <= 1e-12 * std::max(1.0, std::abs(st.u(i, j)))) {
        mass += st.lap_scaled(i, j) * st.h * st.h;
        if (mask) (*mask)(i, j) = true;
      }
    }
  return mass;
}

}  // namespace

namespace {

ObstacleState make_state(const Potential& p, double L, double h) {
  ObstacleState st;
  st.n = static_cast<Eigen::Index>(std::llround(2.0 * L / h)) + 1;
  st.h = h;
  st.u.resize(st.n, st.n);
  st.psi_base.resize(st.n, st.n);
  st.lap_scaled.resize(st.n, st.n);
  for (Eigen::Index i = 0; i < st.n; ++i) {
    for (Eigen::Index j = 0; j < st.n; ++j) {
      const Vec2 x(-L + h * static_cast<double>(i), -L + h * static_cast<double>(j));
      st.psi_base(i, j) = -0.5 * p.value(x);
      st.lap_scaled(i, j) = p.laplacian(x) / (4.0 * M_PI);
      // Dirichlet data -log|x| on the box edge; harmless initial guess inside.
      st.u(i, j) = -std::log(std::max(x.norm(), 0.25 * h));
    }
  }
  return st;
}

// Node-aligned prolongation from a grid of spacing 2h.
void prolongate(const ObstacleState& coarse, ObstacleState& fine) {
  const Eigen::Index nf = fine.n;
  for (Eigen::Index i = 1; i + 1 < nf; ++i)
    for (Eigen::Index j = 1; j + 1 < nf; ++j) {
      const Eigen::Index ic = i / 2, jc = j / 2;
      if (i % 2 == 0 && j % 2 == 0)
        fine.u(i, j) = coarse.u(ic, jc);
      else if (i % 2 == 0)
        fine.u(i, j) = 0.5 * (coarse.u(ic, jc) + coarse.u(ic, jc + 1));
      else if (j % 2 == 0)
        fine.u(i, j) = 0.5 * (coarse.u(ic, jc) + coarse.u(ic + 1, jc));
      else
        fine.u(i, j) = 0.25 * (coarse.u(ic, jc) + coarse.u(ic + 1, jc) +
                               coarse.u(ic, jc + 1) + coarse.u(ic + 1, jc + 1));
    }
}

// Bisect c to unit contact mass at a fixed grid; returns the final c.
double bisect_mass(ObstacleState& st, double clo, double chi, double c_width,
                   const ObstacleGridOptions& opt, double tol) {
  psor_solve(st, clo, opt.omega, tol, opt.max_sweeps);
  const double mlo = contact_mass(st, clo, nullptr);
  Eigen::ArrayXXd ulo = st.u;
  psor_solve(st, chi, opt.omega, tol, opt.max_sweeps);
  const double mhi = contact_mass(st, chi, nullptr);
  if (!(mlo < 1.0 && mhi > 1.0))
    throw ConvergenceError("solve_grid: unit mass not bracketed by the c search");
  st.u = ulo;
  while (chi - clo > c_width) {
    const double c = 0.5 * (clo + chi);
    psor_solve(st, c, opt.omega, tol, opt.max_sweeps);
    (contact_mass(st, c, nullptr) < 1.0 ? clo : chi) = c;
  }
  return 0.5 * (clo + chi);
}

}  // namespace

EquilibriumMeasure EquilibriumMeasure::solve_grid(const Potential& p,
                                                  const ObstacleGridOptions& opt) {
  p.validate();
  const double L = opt.half_width;
  const double h = opt.cell;
  const Eigen::Index n = static_cast<Eigen::Index>(std::llround(2.0 * L / h)) + 1;
  if (n < 9) throw InvalidParamsError("solve_grid: grid too coarse");

  // Coarse-to-fine continuation: the c search runs fully on the coarsest
  // grid, then each refinement re-centers it in a narrow bracket with a
  // prolongated warm start.
  std::vector<double> spacings{h};
  while (spacings.back() < 1.0 / 16 - 1e-12 && spacings.size() < 6)
    spacings.push_back(2.0 * spacings.back());

  ObstacleState st;
  double c = 0.0;
  for (std::size_t lvl = spacings.size(); lvl-- > 0;) {
    ObstacleState next = make_state(p, L, spacings[lvl]);
    const bool coarsest = (lvl + 1 == spacings.size());
    const bool finest = (lvl == 0);
    if (!coarsest) prolongate(st, next);
    st = std::move(next);
    const double inner = finest ? opt.inner_tol : 1e-6;
    const double width = finest ? 1e-8 : 0.01 * spacings[lvl];
    if (coarsest) {
      c = bisect_mass(st, -opt.c_bracket, opt.c_bracket, width, opt, inner);
    } else {
      const double half = 4.0 * spacings[lvl + 1];
      c = bisect_mass(st, c - half, c + half, width, opt, inner);
    }
  }
  psor_solve(st, c, opt.omega, opt.psor_tol, opt.max_sweeps);

  EquilibriumMeasure em;
  em.radial_ = false;
  em.pot_ = p;
  em.c_ = c;
  em.gorigin_ = Vec2(-L, -L);
  em.gh_ = h;
  em.u_ = st.u;

  const double raw_mass = contact_mass(st, c, &em.contact_);

  // The coincidence set must stay inside the box.
  for (Eigen::Index k = 0; k < n; ++k)
    if (em.contact_(1, k) || em.contact_(n - 2, k) || em.contact_(k, 1) ||
        em.contact_(k, n - 2))
      throw DomainTooSmallError("solve_grid: coincidence set touches the box edge");

  // Normalize the density so the measure has exactly unit mass; the raw
  // defect is set by how the free boundary lands on the grid.
  const double norm = 1.0 / raw_mass;
  em.m0_ = Eigen::ArrayXXd::Zero(n, n);
  double mlo2 = std::numeric_limits<double>::infinity(), mhi2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (em.contact_(i, j)) {
        em.m0_(i, j) = st.lap_scaled(i, j) * norm;
        mlo2 = std::min(mlo2, em.m0_(i, j));
        mhi2 = std::max(mhi2, em.m0_(i, j));
      }
  em.m_lo_ = mlo2;
  em.m_hi_ = mhi2;

  double area = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!em.contact_(i, j)) continue;
      area += h * h;
      const bool rim = !em.contact_(i - 1, j) || !em.contact_(i + 1, j) ||
                       !em.contact_(i, j - 1) || !em.contact_(i, j + 1);
      if (rim)
        em.contact_rim_.push_back(em.gorigin_ + h * Vec2(static_cast<double>(i),
                                                         static_cast<double>(j)));
    }
  em.R_ = std::sqrt(area / M_PI);

  double L0 = 0.0, intV = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (em.contact_(i, j)) {
        const Vec2 x = em.gorigin_ + h * Vec2(static_cast<double>(i), static_cast<double>(j));
        L0 += st.u(i, j) * em.m0_(i, j) * h * h;
        intV += p.value(x) * em.m0_(i, j) * h * h;
      }
  em.L0_ = L0;
  em.I0_ = L0 + intV;
  return em;
}

}  // namespace coulomb
