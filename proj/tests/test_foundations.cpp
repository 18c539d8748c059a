#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "coulomb/quadrature.hpp"
#include "coulomb/rng.hpp"
#include "coulomb/specfun.hpp"

using namespace coulomb;

TEST_CASE("gauss-kronrod hits smooth integrals at machine accuracy") {
  auto r = integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-13);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-14));

  r = integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 1e-13);
  CHECK(r.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
}

TEST_CASE("gauss-kronrod handles endpoint log singularities") {
  // int_0^1 log x dx = -1
  auto r = integrate([](double x) { return std::log(x); }, 1e-300, 1.0, 1e-12,
                     20000);
  CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("integrate_split respects interior kinks") {
  // int_0^2 |x-1| dx = 1
  auto r = integrate_split([](double x) { return std::abs(x - 1.0); }, 0.0,
                           2.0, {1.0}, 1e-13);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("log_gamma matches integer factorials exactly enough") {
  double fact = 1.0;
  for (int n = 1; n <= 20; ++n) {
    fact *= n;
    CHECK(log_gamma(n + 1.0) == doctest::Approx(std::log(fact)).epsilon(1e-13));
  }
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-13));
}

TEST_CASE("exp_int_e1 against direct quadrature") {
  // E1(x) = int_x^inf e^-u / u du, mapped to [0,1)
  auto e1_quad = [](double x) {
    return integrate(
               [x](double s) {
                 const double u = x + s / (1.0 - s);
                 const double jac = 1.0 / ((1.0 - s) * (1.0 - s));
                 return std::exp(-u) / u * jac;
               },
               0.0, 1.0 - 1e-12, 1e-13)
        .value;
  };
  for (double x : {0.05, 0.3, 0.9, 1.0, 1.1, 2.0, 5.0, 13.0, 29.0}) {
    CHECK(exp_int_e1(x) == doctest::Approx(e1_quad(x)).epsilon(1e-11));
  }
  CHECK(exp_int_e1(1.0) == doctest::Approx(0.21938393439552029).epsilon(1e-12));
}

TEST_CASE("rng is deterministic and reasonably uniform") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng c(42), d(43);
  bool differ = false;
  for (int i = 0; i < 10; ++i) differ |= (c.next_u64() != d.next_u64());
  CHECK(differ);

  Rng r(7);
  double mean = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) mean += r.uniform();
  mean /= n;
  CHECK(mean == doctest::Approx(0.5).epsilon(5e-3));
}

TEST_CASE("gaussian pairs have unit variance and no correlation") {
  Rng r(11);
  double m1 = 0, m2 = 0, cross = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const Vec2 g = r.gaussian_pair();
    m1 += g.x();
    m2 += g.x() * g.x();
    cross += g.x() * g.y();
  }
  CHECK(std::abs(m1 / n) < 0.01);
  CHECK(m2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(cross / n) < 0.01);
}

TEST_CASE("rng streams are independent") {
  Rng a(42, 0), b(42, 1);
  bool differ = false;
  for (int i = 0; i < 10; ++i) differ |= (a.next_u64() != b.next_u64());
  CHECK(differ);
}
