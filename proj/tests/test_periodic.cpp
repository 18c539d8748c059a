#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "coulomb/periodic.hpp"
#include "coulomb/rng.hpp"

using namespace coulomb;

TEST_CASE("green function symmetry on the unit square torus") {
  const Torus sq = Torus::square();
  TorusGreen g(sq, 1e-10);
  CHECK(g({0.5, 0.5}) == doctest::Approx(g({-0.5, 0.5})).epsilon(1e-14));
  CHECK(g({0.3, 0.1}) == doctest::Approx(g({-0.3, -0.1})).epsilon(1e-13));
  CHECK(g({0.3, 0.1}) == doctest::Approx(g({1.3, 0.1})).epsilon(1e-12));
}

TEST_CASE("green function rejects lattice points") {
  const Torus sq = Torus::square();
  TorusGreen g(sq, 1e-8);
  CHECK_THROWS_AS(g({0, 0}), DomainError);
  CHECK_THROWS_AS(g({1, 1}), DomainError);
}

TEST_CASE("ewald parameter independence") {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    // random moderately skewed unit-volume torus
    const double x = -0.5 + rng.uniform();
    const double y = 0.8 + rng.uniform();
    const Torus t = Torus::from_modular(x, y);
    const double tol = 1e-9;
    TorusGreen g1(t, tol);
    TorusGreen g2(t, tol, 2.0 * g1.alpha());
    for (int k = 0; k < 100; ++k) {
      const Vec2 p(rng.uniform() - 0.5, rng.uniform() - 0.5);
      if (t.reduce(p).norm() < 1e-3) continue;
      CHECK(std::abs(g1(p) - g2(p)) <= 2.0 * tol);
    }
    CHECK(std::abs(g1.regularized_constant() - g2.regularized_constant()) <=
          2.0 * tol);
  }
}

TEST_CASE("zero mean of G at the quadrature floor") {
  // The 64 x 64 midpoint sum of a log-singular integrand carries an
  // O(N^-2) quadrature error, which dominates the Ewald tails here.
  const int N = 64;
  for (const Torus& t : {Torus::square(), Torus::triangular()}) {
    TorusGreen g(t, 1e-10);
    double mean = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const double a = (i + 0.5) / N - 0.5;
        const double b = (j + 0.5) / N - 0.5;
        mean += g(a * t.u + b * t.v);
      }
    mean /= N * N;
    CHECK(std::abs(mean) < 5.0 / (N * N));
  }
}

TEST_CASE("regularized constant against richardson extrapolation") {
  Rng rng(4);
  for (const Torus& t :
       {Torus::square(), Torus::triangular(), Torus::from_modular(0.21, 1.37)}) {
    const double tol = 1e-9;
    TorusGreen g(t, tol);
    Vec2 d(0.9 * rng.uniform() + 0.1, 0.8 * rng.uniform() + 0.1);
    d.normalize();
    const double t0 = 0.04;
    auto f = [&](double s) { return g(s * d) + std::log(s); };
    const double f1 = f(t0), f2 = f(t0 / 2), f3 = f(t0 / 4);
    const double r1 = (4 * f2 - f1) / 3, r2 = (4 * f3 - f2) / 3;
    const double extrapolated = (16 * r2 - r1) / 15;
    CHECK(std::abs(extrapolated - g.regularized_constant()) <= 10 * tol);
  }
}

TEST_CASE("regularized constant shifts by log lambda under dilation") {
  const Torus sq = Torus::square();
  for (double lambda : {2.0, 0.5, 3.7}) {
    Torus scaled = sq;
    scaled.u *= lambda;
    scaled.v *= lambda;
    const double shift = green_regularized_constant(scaled, 1e-10) -
                         green_regularized_constant(sq, 1e-10);
    CHECK(shift == doctest::Approx(std::log(lambda)).epsilon(1e-9));
  }
}

TEST_CASE("triangular torus is invariant under its 60 degree rotation") {
  const Torus tri = Torus::triangular();
  const double c = std::cos(M_PI / 3), s = std::sin(M_PI / 3);
  Torus rot;
  rot.u = Vec2(c * tri.u.x() - s * tri.u.y(), s * tri.u.x() + c * tri.u.y());
  rot.v = Vec2(c * tri.v.x() - s * tri.v.y(), s * tri.v.x() + c * tri.v.y());
  rot.points = Configuration::Zero(1, 2);
  CHECK(green_regularized_constant(rot, 1e-10) ==
        doctest::Approx(green_regularized_constant(tri, 1e-10)).epsilon(1e-9));
}

TEST_CASE("w_periodic is translation invariant for one point") {
  Torus a = Torus::square();
  Torus b = Torus::square();
  b.points(0, 0) = 0.3;
  b.points(0, 1) = 0.7;
  const double tol = 1e-9;
  CHECK(w_periodic(a, tol).W == doctest::Approx(w_periodic(b, tol).W).epsilon(1e-12));
}

TEST_CASE("w_periodic refinement consistency: a lattice seen in a doubled cell") {
  const double tol = 1e-9;
  // Z^2 as one point in the unit cell or two points in a 2 x 1 cell
  Torus one = Torus::square();
  Torus two;
  two.u = Vec2(2, 0);
  two.v = Vec2(0, 1);
  two.points = Configuration(2, 2);
  two.points << 0, 0, 1, 0;
  const auto w1 = w_periodic(one, tol);
  const auto w2 = w_periodic(two, tol);
  CHECK(std::abs(w1.W - w2.W) <= 10 * tol);

  // same consistency for the triangular lattice
  Torus tri1 = Torus::triangular();
  Torus tri2;
  tri2.u = 2.0 * tri1.u;
  tri2.v = tri1.v;
  tri2.points = Configuration(2, 2);
  tri2.points << 0, 0, tri1.u.x(), tri1.u.y();
  CHECK(std::abs(w_periodic(tri2, tol).W - w_periodic(tri1, tol).W) <= 10 * tol);
}

TEST_CASE("w_periodic requires unit background density") {
  Torus bad = Torus::square();
  bad.u *= 2.0;  // |T| = 2 with one point
  CHECK_THROWS_AS(w_periodic(bad, 1e-8), InvalidParamsError);
}

TEST_CASE("w_periodic is invariant under relabeling and rigid translation") {
  const double tol = 1e-9;
  Torus t;
  t.u = Vec2(2, 0);
  t.v = Vec2(0, 1);
  t.points = Configuration(2, 2);
  t.points << 0.1, 0.2, 1.3, 0.6;
  const double w0 = w_periodic(t, tol).W;

  Torus swapped = t;
  swapped.points.row(0) = t.points.row(1);
  swapped.points.row(1) = t.points.row(0);
  CHECK(w_periodic(swapped, tol).W == doctest::Approx(w0).epsilon(1e-13));

  Torus moved = t;
  moved.points.col(0).array() += 0.37;
  moved.points.col(1).array() -= 1.88;
  CHECK(w_periodic(moved, tol).W == doctest::Approx(w0).epsilon(1e-10));
}

TEST_CASE("scaling law for w_scaled on triangular and square tori") {
  const double tol = 1e-8;
  for (const Torus& t : {Torus::triangular(), Torus::square()}) {
    const double w1 = w_periodic(t, tol).W;
    for (double m : {0.5, 1.0, 2.0, M_PI}) {
      const double direct = w_scaled(t, m, tol).W;
      const double predicted = m * (w1 - 0.5 * M_PI * std::log(m));
      CHECK(std::abs(direct - predicted) <= 10.0 * tol);
    }
  }
}

TEST_CASE("m = 1 rescaling is the identity") {
  const Torus t = Torus::triangular();
  CHECK(w_scaled(t, 1.0, 1e-9).W ==
        doctest::Approx(w_periodic(t, 1e-9).W).epsilon(1e-13));
}

TEST_CASE("lattice scan: triangular minimum, mirror symmetry, flat-torus growth") {
  const auto rows = lattice_scan(21, 21, 1e-8);
  REQUIRE(rows.size() == 441);
  const std::size_t best = scan_argmin(rows);
  // hexagonal corner tau = exp(i pi/3)
  CHECK(rows[best].tau_re == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rows[best].tau_im ==
        doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));

  // W(tau) = W(-conj tau)
  for (std::size_t j = 0; j < 21; ++j) {
    const auto& left = rows[j * 21 + 3];
    const auto& right = rows[j * 21 + (20 - 3)];
    CHECK(left.W == doctest::Approx(right.W).epsilon(1e-10));
  }

  // square beats nothing: W(i) - W(hex) is positive and well resolved
  const auto& square = rows[10];  // j = 0 row, x = 0
  CHECK(square.tau_re == doctest::Approx(0.0));
  CHECK(square.tau_im == doctest::Approx(1.0));
  CHECK(square.W - rows[best].W > 100.0 * (square.err + rows[best].err));

  // increasing along the ray tau = iy, y >= 1
  double prev = square.W;
  for (int j = 1; j < 21; ++j) {
    const auto& row = rows[static_cast<std::size_t>(j) * 21 + 10];
    CHECK(row.W > prev);
    prev = row.W;
  }
}
