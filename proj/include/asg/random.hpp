#pragma once

#include "asg/convex_set.hpp"

#include <cstdint>
#include <random>

namespace asg {

/// Seeded generator with platform-independent draws: only raw mt19937_64
/// output is used, never the implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform point in the closed ball of the given radius (rejection sampling).
  Vec in_ball(int dim, double radius);

  /// Uniform point in a box / simplex / product of those.
  Vec in_set(const ConvexSet& set);

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace asg
