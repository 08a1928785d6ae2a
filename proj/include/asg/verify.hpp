#pragma once

#include "asg/report.hpp"
#include "asg/scenario_config.hpp"
#include "asg/simulation.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace asg {

struct PropertyResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// Smooth game with quadratic J and a model affine in both theta and r:
///   f_hat(theta, r) = (M0 + sum_i r_i M_i) theta + b0 + sum_i r_i b_i
///   J(r, a) = r^T Q r / 2 + a^T S r + a^T P a / 2 + c^T a
/// on the unit simplex, Theta = [-1, 1]^n_theta. The follower is
/// f_hat(theta_true, .). No exact segment integral is supplied, so the gain
/// matrix goes through Gauss-Legendre quadrature.
struct SmoothTestGame {
  GameDefinition game;
  Vec theta_true;
};
SmoothTestGame smooth_test_game(std::uint64_t seed, int n_r = 3, int n_a = 2, int n_theta = 4);

/// Follower f_hat(theta, r) + delta(r) with each |delta_l| <= amplitude,
/// pointing into [0, c0]. Returns the strategy and the guaranteed
/// mismatch level eps_f = sqrt(1 + L) * sqrt(L) * amplitude.
struct MismatchFollower {
  FollowerStrategy follower;
  double eps_f = 0.0;
};
MismatchFollower bounded_mismatch_follower(const ddos::DdosScenario& sc, const ddos::QuasiRbfModel& model,
                                           const Vec& theta, double amplitude);

/// Estimator update with the sign of the vector field flipped.
EstimatorIncrementFn sign_flipped_increment();

/// Geometry, model, gradient, gain identity and oracle properties on random samples.
std::vector<PropertyResult> verify_properties(std::uint64_t seed);

/// Invariants recorded during a run plus the stationarity residual at the horizon.
std::vector<PropertyResult> verify_run(const std::string& name, const RunResult& result, const RunSummary& summary);

/// A short two-link run with the sign-flipped estimator; passes when the
/// Lyapunov check catches the mutation.
PropertyResult verify_mutation_detected(std::uint64_t seed);

std::string format_property(const PropertyResult& p);

}  // namespace asg
