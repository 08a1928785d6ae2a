#include "asg/optimizer.hpp"

#include "asg/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace asg {

void OptimizerConfig::validate() const {
  if (!(lambda_r > 0.0)) throw InputError("lambda_r must be positive");
  if (!(step > 0.0)) throw InputError("step must be positive");
}

Vec leader_field(const GameDefinition& game, const Vec& r, const Vec& theta_hat, double lambda_r) {
  const Vec descent = -lambda_r * predicted_cost_grad_r(game, r, theta_hat).transpose();
  return game.leader_set.project_tangent_cone(r, descent);
}

Vec leader_step(const GameDefinition& game, const Vec& r, const Vec& theta_hat, const OptimizerConfig& cfg) {
  const Vec descent = -cfg.lambda_r * predicted_cost_grad_r(game, r, theta_hat).transpose();
  return game.leader_set.project_point(r + cfg.step * descent);
}

double stationarity_residual(const GameDefinition& game, const Vec& r, const Vec& theta_hat) {
  return leader_field(game, r, theta_hat, 1.0).norm();
}

Vec min_norm_in_hull(const Mat& columns, int iterations) {
  const auto m = columns.cols();
  if (m == 0) throw InputError("min_norm_in_hull: no points");
  if (m == 1) return columns.col(0);
  const Mat gram = columns.transpose() * columns;
  const double lip = std::max(gram.selfadjointView<Eigen::Upper>().eigenvalues().maxCoeff(), 1e-300);
  Vec w = Vec::Constant(m, 1.0 / static_cast<double>(m));
  for (int it = 0; it < iterations; ++it) {
    w = project_onto_simplex(w - (gram * w) / lip, 1.0);
  }
  return columns * w;
}

double nonsmooth_stationarity_residual(const GameDefinition& game, const Vec& r, const Vec& theta_hat,
                                       double radius) {
  const ConvexSet& set = game.leader_set;
  const auto n = r.size();
  std::vector<Vec> fields;
  fields.push_back(leader_field(game, r, theta_hat, 1.0));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      Vec probe = r;
      probe[i] += radius / std::sqrt(2.0);
      probe[j] -= radius / std::sqrt(2.0);
      probe = set.project_point(probe);
      fields.push_back(leader_field(game, probe, theta_hat, 1.0));
    }
  }
  Mat g(n, static_cast<Eigen::Index>(fields.size()));
  for (std::size_t k = 0; k < fields.size(); ++k) g.col(static_cast<Eigen::Index>(k)) = fields[k];
  return min_norm_in_hull(g).norm();
}

}  // namespace asg
