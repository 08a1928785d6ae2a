#pragma once

#include "asg/convex_set.hpp"

#include <Eigen/Sparse>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace asg {

using RowVec = Eigen::RowVectorXd;
using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Follower model a = f_hat(theta_hat, r) that is affine in theta_hat:
///   f_hat(theta_hat, r) = jac_theta(r) * theta_hat + offset(r).
/// Gradients are row vectors; Jacobians are n_a x n_theta and n_a x n_r.
class ParameterizedModel {
 public:
  virtual ~ParameterizedModel() = default;

  virtual int n_theta() const = 0;
  virtual int n_a() const = 0;
  virtual int n_r() const = 0;

  /// Parameter set Theta.
  virtual const ConvexSet& theta_set() const = 0;
  /// Leader action set the model is defined on.
  virtual const ConvexSet& r_set() const = 0;

  virtual SparseMat jac_theta(const Vec& r) const = 0;
  virtual Mat jac_r(const Vec& theta_hat, const Vec& r) const = 0;
  virtual Vec offset(const Vec& /*r*/) const { return Vec::Zero(n_a()); }

  virtual Vec eval(const Vec& theta_hat, const Vec& r) const {
    return jac_theta(r) * theta_hat + offset(r);
  }
};

/// Model assembled from callables; used for synthetic and smooth test games.
class FunctionalModel final : public ParameterizedModel {
 public:
  using JacThetaFn = std::function<Mat(const Vec& r)>;
  using JacRFn = std::function<Mat(const Vec& theta_hat, const Vec& r)>;
  using OffsetFn = std::function<Vec(const Vec& r)>;
  using EvalFn = std::function<Vec(const Vec& theta_hat, const Vec& r)>;

  FunctionalModel(ConvexSet theta_set, ConvexSet r_set, int n_a, JacThetaFn jac_theta, JacRFn jac_r,
                  OffsetFn offset = {}, EvalFn eval_override = {});

  int n_theta() const override { return theta_set_.dim(); }
  int n_a() const override { return n_a_; }
  int n_r() const override { return r_set_.dim(); }
  const ConvexSet& theta_set() const override { return theta_set_; }
  const ConvexSet& r_set() const override { return r_set_; }
  SparseMat jac_theta(const Vec& r) const override;
  Mat jac_r(const Vec& theta_hat, const Vec& r) const override { return jac_r_(theta_hat, r); }
  Vec offset(const Vec& r) const override;
  Vec eval(const Vec& theta_hat, const Vec& r) const override;

 private:
  ConvexSet theta_set_;
  ConvexSet r_set_;
  int n_a_;
  JacThetaFn jac_theta_;
  JacRFn jac_r_;
  OffsetFn offset_;
  EvalFn eval_override_;
};

using CostFn = std::function<double(const Vec& r, const Vec& a)>;
using CostGradFn = std::function<RowVec(const Vec& r, const Vec& a)>;
/// Exact line integral  int_0^1 grad_a J(r, a0 + rho (a1 - a0)) d rho.
using SegmentGradFn = std::function<RowVec(const Vec& r, const Vec& a0, const Vec& a1)>;
using ResponseFn = std::function<Vec(const Vec& r)>;
using FollowerCostFn = std::function<double(const Vec& a, const Vec& r)>;

/// The follower's actual behaviour. Only the simulator (the environment)
/// reads it; `true_theta` is diagnostic and never reaches the learner.
struct FollowerStrategy {
  ResponseFn respond;
  FollowerCostFn cost;  ///< H(a, r); optional, logged only
  std::optional<Vec> true_theta;
  /// true when f_hat(true_theta, .) reproduces `respond` exactly
  bool matched = false;
  std::string label;
};

struct GameDefinition {
  ConvexSet leader_set;
  CostFn cost;
  CostGradFn grad_r_cost;
  CostGradFn grad_a_cost;
  SegmentGradFn segment_grad_a;  ///< optional; Gauss-Legendre otherwise
  FollowerStrategy follower;
  std::shared_ptr<const ParameterizedModel> model;
};

struct StrategySwitch {
  double time = 0.0;
  FollowerStrategy follower;
};

/// Times must be strictly increasing.
struct StrategySwitchSchedule {
  std::vector<StrategySwitch> switches;
  void validate() const;
};

Vec predicted_response(const ParameterizedModel& model, const Vec& theta_hat, const Vec& r);

/// J_hat(r, theta_hat) = J(r, f_hat(theta_hat, r)).
double predicted_cost(const GameDefinition& game, const Vec& r, const Vec& theta_hat);

struct CostGradients {
  RowVec grad_r;
  RowVec grad_theta;
};

CostGradients predicted_cost_gradients(const GameDefinition& game, const Vec& r, const Vec& theta_hat);

/// Only the leader-action gradient; avoids forming grad_theta.
RowVec predicted_cost_grad_r(const GameDefinition& game, const Vec& r, const Vec& theta_hat);

/// Samples r in the model's r-set and theta pairs in Theta; checks the affine
/// identity and that the declared jac_theta reproduces parameter increments.
bool affinity_check(const ParameterizedModel& model, int sample_count, std::uint64_t seed);

}  // namespace asg
