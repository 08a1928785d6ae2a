#pragma once

#include "asg/game.hpp"

#include <string>
#include <vector>

namespace asg {

struct EstimatorParams {
  double lambda_theta = 0.02;
  double eps_obs = 0.002;
  double eps_obs_prime = 0.001;

  /// Throws InputError unless eps_obs > eps_obs_prime > 0 and lambda_theta > 0.
  void validate() const;
};

struct EstimatorState {
  Vec theta_hat;
  double lambda_e = 0.0;  ///< always 0 or params.lambda_theta
  bool started = false;   ///< false until the first switching decision
  EstimatorParams params;
};

/// One observed round: leader action played, follower action seen, and the
/// leader's realised cost J(r, a).
struct Observation {
  Vec r;
  Vec a;
  double j_obs = 0.0;
};

/// e_obs = (f_hat(theta_hat, r) - a, J_hat(r, theta_hat) - j_obs), length n_a + 1.
Vec observation_error(const GameDefinition& game, const Observation& obs, const Vec& theta_hat);

/// Line integral  int_0^1 grad_a J(r, a0 + rho (a1 - a0)) d rho.
/// Uses the game's exact segment integral when present, otherwise composite
/// 8-point Gauss-Legendre with `panels` panels.
RowVec segment_cost_gradient(const GameDefinition& game, const Vec& r, const Vec& a0, const Vec& a1,
                             int panels = 1);

/// K = [I; g] * jac_theta(r), with g the averaged cost gradient along the
/// segment from the observed action to the predicted one. Kept factored so the
/// simulator never materialises an (n_a+1) x n_theta dense matrix.
struct GainMatrix {
  RowVec line_grad_a;  ///< g, length n_a
  SparseMat jac_theta;

  int rows() const { return static_cast<int>(line_grad_a.size()) + 1; }
  int cols() const { return static_cast<int>(jac_theta.cols()); }
  Mat dense() const;
  Vec apply(const Vec& delta_theta) const;     ///< K * delta
  Vec apply_transpose(const Vec& e) const;     ///< K^T * e
  /// K^T K restricted to its non-zero columns, as (column list, block).
  std::pair<std::vector<int>, Mat> normal_block() const;
};

GainMatrix gain_matrix(const GameDefinition& game, const Observation& obs, const Vec& theta_hat);

/// Hysteresis rule: lambda_theta at or above eps_obs, 0 at or below
/// eps_obs_prime, previous value inside the band (lambda_theta on the very
/// first decision).
double switching_update(const EstimatorState& state, double e_norm);

/// theta_hat+ = Proj_Theta(theta_hat - h * lambda * K^T e), switching first.
EstimatorState estimator_step(const GameDefinition& game, const EstimatorState& state, const Observation& obs,
                              double h);

/// The unprojected increment -h lambda_e K^T e, with e and K already computed.
Vec estimator_increment(const EstimatorState& state, const Vec& e_obs, const GainMatrix& gain, double h);

/// Leader/parameter sample points for kappa and mismatch estimates. The
/// product r_points x theta_points is evaluated.
struct SampleGrid {
  std::vector<Vec> r_points;
  std::vector<Vec> theta_points;
  std::string description;
};

struct KappaEstimate {
  double kappa = 0.0;
  std::size_t samples = 0;
  std::string grid;
};

/// Sampled lower bound on max ||[I; int grad_a J(r, rho f_hat + (1-rho) f) d rho]||.
KappaEstimate kappa_estimate(const GameDefinition& game, const SampleGrid& grid);

struct MismatchReport {
  bool holds = false;
  double eps_f = 0.0;
  double kappa = 0.0;
  /// max_r kappa * ||f_hat(theta_star, r) - f(r)||
  double attained = 0.0;
  /// max_{r, theta_hat} ||[I; g] (f_hat(theta_star, r) - f(r))||, the sharper form
  double attained_sharp = 0.0;
};

MismatchReport mismatch_error_bound_check(const GameDefinition& game, const SampleGrid& grid,
                                          const Vec& theta_star, double eps_f);

}  // namespace asg
