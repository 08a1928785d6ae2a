#pragma once

#include "asg/game.hpp"

namespace asg {

struct OptimizerConfig {
  double lambda_r = 0.002;
  double step = 0.05;

  void validate() const;
};

/// Projected leader velocity [-lambda_r grad_r J_hat^T]_{T_R(r)}.
Vec leader_field(const GameDefinition& game, const Vec& r, const Vec& theta_hat, double lambda_r);

/// r+ = Proj_R(r - h lambda_r grad_r J_hat(r, theta_hat)^T). The cross term
/// grad_theta J_hat * d(theta_hat)/dt is deliberately not fed back.
Vec leader_step(const GameDefinition& game, const Vec& r, const Vec& theta_hat, const OptimizerConfig& cfg);

/// || [-grad_r J_hat(r, theta_hat)^T]_{T_R(r)} ||
double stationarity_residual(const GameDefinition& game, const Vec& r, const Vec& theta_hat);

/// Nonsmooth variant for piecewise-differentiable J_hat: the minimum-norm
/// element of the convex hull of projected negative gradients sampled at r
/// and at points `radius` away along the edge directions e_i - e_j of the
/// leader set. Zero at a kink where the one-sided fields oppose each other.
double nonsmooth_stationarity_residual(const GameDefinition& game, const Vec& r, const Vec& theta_hat,
                                       double radius);

/// Minimum-norm point of conv{columns of G} (projected gradient over weights).
Vec min_norm_in_hull(const Mat& columns, int iterations = 4000);

}  // namespace asg
