#pragma once

#include "asg/convex_set.hpp"
#include "asg/ddos.hpp"

#include <functional>
#include <vector>

namespace asg {

struct GridSpec {
  int resolution = 200;
  void validate() const;  ///< resolution >= 2
};

/// Grid of a set of dimension <= 3: boxes get resolution + 1 points per axis,
/// scaled simplices the points total * k / resolution with integer k summing
/// to resolution, products the Cartesian product of their factors.
std::vector<Vec> grid_points(const ConvexSet& set, const GridSpec& grid);

/// Brute-force point projection: nearest grid point of the set.
Vec brute_point_projection(const ConvexSet& set, const Vec& v, const GridSpec& grid);

/// Brute-force tangent-cone projection at x: nearest point to v among grid
/// directions in [-|v|, |v|]^n that satisfy the cone's defining constraints
/// at x (active bounds, zero sum on simplex blocks).
Vec brute_projection(const ConvexSet& set, const Vec& x, const Vec& v, const GridSpec& grid);

/// Central differences, one coordinate at a time.
RowVec finite_diff_gradient(const std::function<double(const Vec&)>& fn, const Vec& x, double h_fd);

/// Every follower action minimising H(., r), ties within `tol` included.
using BestResponseSetFn = std::function<std::vector<Vec>(const Vec& r)>;

struct StackelbergResult {
  Vec r_star;
  double j_star = 0.0;
  bool is_epsilon_action = false;
  double epsilon = 0.0;
  double slack = 0.0;      ///< grid modulus added to epsilon
  double j_refined = 0.0;  ///< min over the grid at twice the resolution
  long grid_points = 0;
};

/// min over leader grid points of max over the best-response set of J(r, a).
/// `grid_at` produces the leader grid for a resolution; the returned action
/// is certified against the grid at twice the resolution.
StackelbergResult grid_stackelberg(const std::function<std::vector<Vec>(int)>& grid_at,
                                   const std::function<double(const Vec&, const Vec&)>& cost,
                                   const BestResponseSetFn& best_responses, const GridSpec& grid, double epsilon,
                                   double slack_per_spacing);

namespace ddos {

/// All flood patterns of A/c0 links that minimise the attacker cost at r.
std::vector<Vec> best_response_set(const Vec& r, const DdosScenario& sc, double tol = 1e-12);

/// Leader grid over {r : sum r = R_total, 0 <= r_l <= c0}: the first L-1
/// coordinates take the values min(c0, R) k / resolution and the last one
/// absorbs the remainder.
std::vector<Vec> leader_grid(const DdosScenario& sc, int resolution);

StackelbergResult grid_stackelberg(const DdosScenario& sc, const GridSpec& grid, double epsilon);

/// Worst-case leader cost max_{a in beta(r)} J(r, a).
double worst_case_cost(const Vec& r, const DdosScenario& sc);

}  // namespace ddos

}  // namespace asg
