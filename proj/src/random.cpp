#include "asg/random.hpp"

#include <cmath>
#include <type_traits>
#include <variant>

namespace asg {

Vec Rng::in_ball(int dim, double radius) {
  Vec v(dim);
  if (dim == 0 || radius <= 0.0) return Vec::Zero(dim);
  // Rejection from the enclosing cube; acceptance is fine for the small
  // dimensions the leader action lives in.
  for (;;) {
    for (int i = 0; i < dim; ++i) v[i] = uniform(-1.0, 1.0);
    if (v.squaredNorm() <= 1.0) return radius * v;
  }
}

Vec Rng::in_set(const ConvexSet& set) {
  return std::visit(
      [&](const auto& s) -> Vec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          Vec v(s.lower.size());
          for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = uniform(s.lower[i], s.upper[i]);
          return v;
        } else if constexpr (std::is_same_v<T, ScaledSimplex>) {
          // Normalized exponential spacings: uniform on the simplex.
          Vec v(s.dim);
          for (int i = 0; i < s.dim; ++i) v[i] = -std::log1p(-uniform());
          const double sum = v.sum();
          if (sum <= 0.0) return Vec::Constant(s.dim, s.total / s.dim);
          return v * (s.total / sum);
        } else {
          Vec v(set.dim());
          Eigen::Index off = 0;
          for (const auto& f : s.factors) {
            v.segment(off, f.dim()) = in_set(f);
            off += f.dim();
          }
          return v;
        }
      },
      set.shape());
}

}  // namespace asg
