#include "asg/game.hpp"

#include "asg/errors.hpp"
#include "asg/random.hpp"

#include <string>

namespace asg {

FunctionalModel::FunctionalModel(ConvexSet theta_set, ConvexSet r_set, int n_a, JacThetaFn jac_theta,
                                 JacRFn jac_r, OffsetFn offset, EvalFn eval_override)
    : theta_set_(std::move(theta_set)),
      r_set_(std::move(r_set)),
      n_a_(n_a),
      jac_theta_(std::move(jac_theta)),
      jac_r_(std::move(jac_r)),
      offset_(std::move(offset)),
      eval_override_(std::move(eval_override)) {}

SparseMat FunctionalModel::jac_theta(const Vec& r) const { return jac_theta_(r).sparseView(); }

Vec FunctionalModel::offset(const Vec& r) const { return offset_ ? offset_(r) : Vec::Zero(n_a_); }

Vec FunctionalModel::eval(const Vec& theta_hat, const Vec& r) const {
  if (eval_override_) return eval_override_(theta_hat, r);
  return jac_theta_(r) * theta_hat + offset(r);
}

void StrategySwitchSchedule::validate() const {
  for (std::size_t i = 1; i < switches.size(); ++i) {
    if (!(switches[i].time > switches[i - 1].time)) {
      throw InputError("strategy switch times must be strictly increasing");
    }
  }
}

Vec predicted_response(const ParameterizedModel& model, const Vec& theta_hat, const Vec& r) {
  if (theta_hat.size() != model.n_theta()) {
    throw InputError("predicted_response: theta_hat has dimension " + std::to_string(theta_hat.size()) +
                     ", model expects " + std::to_string(model.n_theta()));
  }
  if (r.size() != model.n_r()) {
    throw InputError("predicted_response: r has dimension " + std::to_string(r.size()) +
                     ", model expects " + std::to_string(model.n_r()));
  }
  return model.eval(theta_hat, r);
}

double predicted_cost(const GameDefinition& game, const Vec& r, const Vec& theta_hat) {
  return game.cost(r, predicted_response(*game.model, theta_hat, r));
}

RowVec predicted_cost_grad_r(const GameDefinition& game, const Vec& r, const Vec& theta_hat) {
  const Vec a_hat = predicted_response(*game.model, theta_hat, r);
  RowVec grad = game.grad_r_cost(r, a_hat);
  const Mat jr = game.model->jac_r(theta_hat, r);
  if (jr.size() != 0 && !jr.isZero(0.0)) grad += game.grad_a_cost(r, a_hat) * jr;
  return grad;
}

CostGradients predicted_cost_gradients(const GameDefinition& game, const Vec& r, const Vec& theta_hat) {
  const Vec a_hat = predicted_response(*game.model, theta_hat, r);
  const RowVec ga = game.grad_a_cost(r, a_hat);
  CostGradients out;
  out.grad_r = game.grad_r_cost(r, a_hat) + ga * game.model->jac_r(theta_hat, r);
  out.grad_theta = ga * game.model->jac_theta(r);
  return out;
}

bool affinity_check(const ParameterizedModel& model, int sample_count, std::uint64_t seed) {
  if (sample_count < 1) throw InputError("affinity_check: sample_count must be >= 1");
  constexpr double kTol = 1e-9;
  Rng rng(seed);
  for (int s = 0; s < sample_count; ++s) {
    const Vec r = rng.in_set(model.r_set());
    const Vec t1 = rng.in_set(model.theta_set());
    const Vec t2 = rng.in_set(model.theta_set());
    const double alpha = rng.uniform();
    const Vec lhs = model.eval(alpha * t1 + (1.0 - alpha) * t2, r);
    const Vec rhs = alpha * model.eval(t1, r) + (1.0 - alpha) * model.eval(t2, r);
    if ((lhs - rhs).norm() > kTol * (1.0 + rhs.norm())) return false;

    // The declared Jacobian must reproduce increments at two distinct bases.
    const SparseMat jt = model.jac_theta(r);
    const Vec step = 1e-3 * (t2 - t1);
    for (const Vec* base : {&t1, &t2}) {
      const Vec inc = model.eval(*base + step, r) - model.eval(*base, r);
      if ((inc - jt * step).norm() > kTol * (1.0 + inc.norm())) return false;
    }
  }
  return true;
}

}  // namespace asg
