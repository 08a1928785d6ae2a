#pragma once

#include <Eigen/Dense>

#include <memory>
#include <variant>
#include <vector>

namespace asg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kMembershipTol = 1e-9;

struct Box {
  Vec lower;
  Vec upper;
};

/// {x in R^dim : x_i >= 0, sum_i x_i = total}
struct ScaledSimplex {
  double total = 1.0;
  int dim = 1;
};

class ConvexSet;

struct Product {
  std::vector<ConvexSet> factors;
};

/// Closed convex set with exact Euclidean projection and tangent-cone
/// projection. Immutable value type; all operations are pure.
class ConvexSet {
 public:
  using Variant = std::variant<Box, ScaledSimplex, Product>;

  /// The zero-dimensional box.
  ConvexSet();
  static ConvexSet box(Vec lower, Vec upper);
  static ConvexSet uniform_box(int dim, double lower, double upper);
  static ConvexSet simplex(double total, int dim);
  static ConvexSet product(std::vector<ConvexSet> factors);

  int dim() const { return dim_; }
  const Variant& shape() const { return *shape_; }

  /// argmin_{w in set} |w - v|
  Vec project_point(const Vec& v) const;

  /// Projection of v onto the tangent cone T_set(x). x must lie in the set
  /// within `tol`; coordinates within `tol` of a face count as active.
  Vec project_tangent_cone(const Vec& x, const Vec& v, double tol = kMembershipTol) const;

  bool contains(const Vec& x, double tol = kMembershipTol) const;
  double distance(const Vec& x) const;
  double diameter() const;

 private:
  explicit ConvexSet(Variant shape);

  std::shared_ptr<const Variant> shape_;
  int dim_ = 0;
};

/// Sorted-threshold projection onto {x >= 0, sum x = total}.
Vec project_onto_simplex(const Vec& v, double total);

}  // namespace asg
