#pragma once

#include <Eigen/Core>
#include <functional>
#include <stdexcept>
#include <string>

namespace coulomb {

using Vec2 = Eigen::Vector2d;

/// A planar point configuration, one point per row (original scale).
/// Blown-up coordinates are x' = sqrt(n) * x and are derived on demand.
using Configuration = Eigen::Matrix<double, Eigen::Dynamic, 2>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Evaluation outside the region where an object is defined.
struct DomainError : Error {
  using Error::Error;
};

/// Two points coincide; the pair energy is +infinity.
struct SingularConfigurationError : Error {
  using Error::Error;
};

struct ConvergenceError : Error {
  using Error::Error;
};

/// R V'(R) = 2 has no root in the search bracket.
struct NoSupportError : Error {
  using Error::Error;
};

/// The coincidence set reached the edge of the computational box.
struct DomainTooSmallError : Error {
  using Error::Error;
};

struct NumericalError : Error {
  using Error::Error;
};

struct InvalidParamsError : Error {
  using Error::Error;
};

/// Worker cap for internally parallel loops. Defaults to the
/// COULOMB_LAB_THREADS environment variable, else 1.
int num_threads();
void set_num_threads(int n);

/// Runs f(begin, end) over disjoint index ranges, possibly on several
/// threads. Ranges are blocked deterministically so that reductions
/// combined in block order do not depend on the worker count.
void parallel_for_blocked(Eigen::Index n, Eigen::Index block,
                          const std::function<void(Eigen::Index, Eigen::Index)>& f);

/// Compensated accumulator for long sums of logs.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

inline double sq(double x) { return x * x; }

}  // namespace coulomb
