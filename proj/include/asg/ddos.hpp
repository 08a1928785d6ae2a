#pragma once

#include "asg/game.hpp"

#include <memory>
#include <vector>

namespace asg::ddos {

/// L parallel links of capacity c0 between one source and one destination.
/// The router (leader) spreads r_total units of legitimate traffic, the
/// attacker (follower) injects a_total units of flooding traffic.
struct DdosScenario {
  int links = 2;
  double c0 = 1.0;
  double r_total = 1.0;
  double a_total = 1.0;
  Vec weights;  ///< attacker cost weights; all ones is the zero-sum game

  void validate() const;
  /// R = L c0 / 2, A = ceil(L c0 / 2), unit weights.
  static DdosScenario standard(int links, double c0 = 1.0);
  /// Number of links the attacker floods, A / c0. Throws for non-integral budgets.
  int flooded_links() const;
};

/// u_l = min{r_l, max{c0 - a_l, 0}} with r, a clamped to [0, c0].
Vec legit_traffic(const Vec& r, const Vec& a, double c0);

/// J(r, a) = -sum_l u_l
double router_cost(const Vec& r, const Vec& a, const DdosScenario& sc);
/// H(a, r) = sum_l w_l u_l
double attacker_cost(const Vec& a, const Vec& r, const DdosScenario& sc);

struct RouterCostGradient {
  RowVec grad_r;
  RowVec grad_a;
};

/// One-sided partials: dJ/dr_l = -1 iff r_l < max{c0 - a_l, 0};
/// dJ/da_l = +1 iff 0 < c0 - a_l <= r_l.
RouterCostGradient grad_router_cost(const Vec& r, const Vec& a, double c0);

/// Exact int_0^1 grad_a J(r, a0 + rho (a1 - a0)) d rho; the integrand is
/// piecewise constant in rho, so each coordinate is the length of the rho
/// interval on which c0 - r_l <= a_l(rho) < c0.
RowVec router_cost_segment_gradient(const Vec& r, const Vec& a0, const Vec& a1, double c0);

/// Floods the A/c0 links with the largest w_l r_l (ties to the lowest index).
Vec attacker_best_response(const Vec& r, const DdosScenario& sc);

/// Piecewise-constant follower model with one indicator kernel per
/// half-open hypercube ((j-1) c0/n, j c0/n] of the first L-1 coordinates of r.
/// theta is laid out link-major: theta[l * n^(L-1) + cell].
class QuasiRbfModel final : public ParameterizedModel {
 public:
  QuasiRbfModel(int links, int n_rbf, double c0, double r_total);

  int n_theta() const override { return links_ * cells_; }
  int n_a() const override { return links_; }
  int n_r() const override { return links_; }
  const ConvexSet& theta_set() const override { return theta_set_; }
  const ConvexSet& r_set() const override { return r_set_; }

  SparseMat jac_theta(const Vec& r) const override;
  Mat jac_r(const Vec& theta_hat, const Vec& r) const override;
  Vec eval(const Vec& theta_hat, const Vec& r) const override;

  int links() const { return links_; }
  int n_rbf() const { return n_rbf_; }
  double c0() const { return c0_; }
  int cell_count() const { return cells_; }

  /// Flat cell containing (r_1..r_{L-1}); -1 when outside every kernel.
  int cell_of(const Vec& r) const;
  /// Per-coordinate kernel indices j_k in 1..n for a flat cell.
  std::vector<int> cell_indices(int cell) const;
  /// Kernel center of a flat cell (length L-1).
  Vec cell_center(int cell) const;
  int theta_index(int link, int cell) const { return link * cells_ + cell; }

 private:
  int links_;
  int n_rbf_;
  double c0_;
  int cells_;
  ConvexSet theta_set_;
  ConvexSet r_set_;
};

std::shared_ptr<QuasiRbfModel> build_rbf_model(int links, int n_rbf, double c0, double r_total);

/// For every cell, the best response at the cell center written into that
/// cell's coordinates. The last leader coordinate is R minus the others.
Vec ground_truth_theta(const DdosScenario& sc, const QuasiRbfModel& model);

/// Largest |f_hat(theta, r) - f(r)| over an interior-offset grid of the
/// leader set that avoids cell boundaries.
double representation_gap(const DdosScenario& sc, const QuasiRbfModel& model, const Vec& theta,
                          int resolution);

/// Best-responding attacker with diagnostic ground truth attached.
FollowerStrategy make_follower(const DdosScenario& sc, const QuasiRbfModel& model);

GameDefinition make_game(const DdosScenario& sc, std::shared_ptr<const QuasiRbfModel> model);

}  // namespace asg::ddos
