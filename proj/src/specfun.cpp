#include "coulomb/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace coulomb {

namespace {
constexpr double kEulerGamma = 0.57721566490153286060651209008240;

const double kLanczos[9] = {0.99999999999980993,
                            676.5203681218851,
                            -1259.1392167224028,
                            771.32342877765313,
                            -176.61502916214059,
                            12.507343278686905,
                            -0.13857109526572012,
                            9.9843695780195716e-6,
                            1.5056327351493116e-7};
}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
  if (x < 0.5) {
    // Reflection keeps the series argument away from the pole.
    return std::log(M_PI / std::sin(M_PI * x)) - log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + i);
  const double t = z + 7.5;
  return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t +
         std::log(acc);
}

double log_factorial(unsigned n) { return log_gamma(n + 1.0); }

double exp_int_e1(double x) {
  if (!(x > 0.0)) throw std::domain_error("exp_int_e1: requires x > 0");
  if (x <= 1.0) {
    // E1(x) = -gamma - log x + sum_{k>=1} (-1)^{k+1} x^k / (k * k!)
    double term = 1.0;  // x^k / k!
    double sum = 0.0;
    for (int k = 1; k <= 40; ++k) {
      term *= x / k;
      const double add = ((k & 1) ? term : -term) / k;
      sum += add;
      if (std::abs(add) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    return -kEulerGamma - std::log(x) + sum;
  }
  if (x > 700.0) return 0.0;  // below double underflow once e^{-x} applies
  // Continued fraction e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...))),
  // evaluated with the modified Lentz algorithm.
  const double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int k = 1; k <= 200; ++k) {
    const double a = -static_cast<double>(k) * k;
    b += 2.0;
    d = a * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x);
}

}  // namespace coulomb
