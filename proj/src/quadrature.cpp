#include "coulomb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace coulomb {

namespace {

// QUADPACK (G7,K15) nodes and weights on [-1,1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double res_g = fc * kWg[3];
  double res_k = fc * kWgk[7];
  for (int i = 0; i < 7; ++i) {
    const double x = h * kXgk[i];
    const double fsum = f(c - x) + f(c + x);
    res_k += kWgk[i] * fsum;
    if (i % 2 == 1) res_g += kWg[i / 2] * fsum;
  }
  res_k *= h;
  res_g *= h;
  // QUADPACK-style sharpened error estimate.
  double err = std::abs(res_k - res_g);
  if (err > 0.0) err = std::min(err, 200.0 * err * std::sqrt(200.0 * err));
  err = std::max(err, 1e-300);
  return {a, b, res_k, err};
}

}  // namespace

QuadratureResult integrate_split(const std::function<double(double)>& f,
                                 double a, double b,
                                 const std::vector<double>& breakpoints,
                                 double abs_tol, int max_intervals) {
  std::vector<double> knots;
  knots.push_back(a);
  for (double t : breakpoints)
    if (t > a && t < b) knots.push_back(t);
  knots.push_back(b);
  std::sort(knots.begin(), knots.end());

  std::priority_queue<Segment> heap;
  double total = 0.0, err = 0.0;
  int n = 0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (knots[i] == knots[i + 1]) continue;
    Segment s = gk15(f, knots[i], knots[i + 1]);
    total += s.value;
    err += s.error;
    heap.push(s);
    ++n;
  }
  while (err > abs_tol && n < max_intervals) {
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) break;  // interval exhausted
    Segment left = gk15(f, worst.a, mid);
    Segment right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++n;
  }
  return {total, err, n};
}

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol, int max_intervals) {
  return integrate_split(f, a, b, {}, abs_tol, max_intervals);
}

}  // namespace coulomb
