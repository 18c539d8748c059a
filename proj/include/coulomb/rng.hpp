#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "coulomb/core.hpp"

namespace coulomb {

/// xoshiro256++ with splitmix64 seeding.
///
/// Seeding: the four words of state are successive outputs of splitmix64
/// started at the 64-bit seed. A nonzero stream index derives an
/// independent generator (multistart optimizers, parallel chains) by
/// xoring a splitmix64 output keyed by the stream into the starting point.
///
/// Every draw is a fixed number of generator steps, so sample streams are
/// bit-reproducible across platforms: uniform() consumes one step,
/// gaussian_pair() two.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  /// Uniform on [0,1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0,1]; safe as a log argument.
  double uniform_pos() { return 1.0 - uniform(); }

  /// Two independent standard normals by one Box-Muller transform.
  Vec2 gaussian_pair() {
    double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    double t = 2.0 * M_PI * uniform();
    return {r * std::cos(t), r * std::sin(t)};
  }

  double gaussian() { return gaussian_pair()[0]; }

 private:
  std::array<std::uint64_t, 4> s_;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace coulomb
