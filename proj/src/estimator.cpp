#include "asg/estimator.hpp"

#include "asg/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace asg {

namespace {

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGlNodes = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                            0.9602898564975363};
constexpr std::array<double, 4> kGlWeights = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                              0.1012285362903763};

RowVec gauss_legendre_segment(const GameDefinition& game, const Vec& r, const Vec& a0, const Vec& a1,
                              int panels) {
  RowVec acc = RowVec::Zero(a0.size());
  const double width = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * width;
    for (std::size_t k = 0; k < kGlNodes.size(); ++k) {
      for (double sign : {-1.0, 1.0}) {
        const double rho = mid + sign * kGlNodes[k] * width / 2.0;
        acc += (kGlWeights[k] * width / 2.0) * game.grad_a_cost(r, a0 + rho * (a1 - a0));
      }
    }
  }
  return acc;
}

// [I; g] has spectral norm sqrt(1 + |g|^2).
double stacked_identity_norm(const RowVec& g) { return std::sqrt(1.0 + g.squaredNorm()); }

}  // namespace

void EstimatorParams::validate() const {
  if (!(lambda_theta > 0.0)) throw InputError("lambda_theta must be positive");
  if (!(eps_obs_prime > 0.0)) throw InputError("eps_obs_prime must be positive");
  if (!(eps_obs > eps_obs_prime)) throw InputError("eps_obs must exceed eps_obs_prime");
}

Vec observation_error(const GameDefinition& game, const Observation& obs, const Vec& theta_hat) {
  const Vec a_hat = predicted_response(*game.model, theta_hat, obs.r);
  if (obs.a.size() != a_hat.size()) throw InputError("observation_error: follower action has wrong dimension");
  Vec e(a_hat.size() + 1);
  e.head(a_hat.size()) = a_hat - obs.a;
  e[a_hat.size()] = game.cost(obs.r, a_hat) - obs.j_obs;
  return e;
}

RowVec segment_cost_gradient(const GameDefinition& game, const Vec& r, const Vec& a0, const Vec& a1,
                             int panels) {
  if (game.segment_grad_a) return game.segment_grad_a(r, a0, a1);
  return gauss_legendre_segment(game, r, a0, a1, std::max(panels, 1));
}

Mat GainMatrix::dense() const {
  const Mat jt(jac_theta);
  Mat k(rows(), cols());
  k.topRows(jt.rows()) = jt;
  k.bottomRows(1) = line_grad_a * jt;
  return k;
}

Vec GainMatrix::apply(const Vec& delta_theta) const {
  const Vec top = jac_theta * delta_theta;
  Vec out(top.size() + 1);
  out.head(top.size()) = top;
  out[top.size()] = line_grad_a.dot(top);
  return out;
}

Vec GainMatrix::apply_transpose(const Vec& e) const {
  const auto na = line_grad_a.size();
  const Vec folded = e.head(na) + e[na] * line_grad_a.transpose();
  return jac_theta.transpose() * folded;
}

std::pair<std::vector<int>, Mat> GainMatrix::normal_block() const {
  std::map<int, int> index;
  for (int row = 0; row < jac_theta.outerSize(); ++row) {
    for (SparseMat::InnerIterator it(jac_theta, row); it; ++it) {
      if (it.value() != 0.0) index.emplace(static_cast<int>(it.col()), 0);
    }
  }
  std::vector<int> cols;
  cols.reserve(index.size());
  for (auto& [c, slot] : index) {
    slot = static_cast<int>(cols.size());
    cols.push_back(c);
  }
  Mat js = Mat::Zero(jac_theta.rows(), static_cast<Eigen::Index>(cols.size()));
  for (int row = 0; row < jac_theta.outerSize(); ++row) {
    for (SparseMat::InnerIterator it(jac_theta, row); it; ++it) {
      if (it.value() != 0.0) js(row, index.at(static_cast<int>(it.col()))) = it.value();
    }
  }
  const auto na = line_grad_a.size();
  const Mat middle = Mat::Identity(na, na) + line_grad_a.transpose() * line_grad_a;
  return {std::move(cols), js.transpose() * middle * js};
}

GainMatrix gain_matrix(const GameDefinition& game, const Observation& obs, const Vec& theta_hat) {
  const Vec a_hat = predicted_response(*game.model, theta_hat, obs.r);
  return GainMatrix{segment_cost_gradient(game, obs.r, obs.a, a_hat), game.model->jac_theta(obs.r)};
}

double switching_update(const EstimatorState& state, double e_norm) {
  if (e_norm < 0.0 || std::isnan(e_norm)) throw InputError("switching_update: invalid error norm");
  const auto& p = state.params;
  if (e_norm >= p.eps_obs) return p.lambda_theta;
  if (e_norm <= p.eps_obs_prime) return 0.0;
  return state.started ? state.lambda_e : p.lambda_theta;
}

Vec estimator_increment(const EstimatorState& state, const Vec& e_obs, const GainMatrix& gain, double h) {
  if (state.lambda_e == 0.0) return Vec::Zero(state.theta_hat.size());
  return (-h * state.lambda_e) * gain.apply_transpose(e_obs);
}

EstimatorState estimator_step(const GameDefinition& game, const EstimatorState& state, const Observation& obs,
                              double h) {
  if (!(h > 0.0)) throw InputError("estimator_step: step must be positive");
  EstimatorState next = state;
  const Vec e = observation_error(game, obs, state.theta_hat);
  next.lambda_e = switching_update(state, e.norm());
  next.started = true;
  if (next.lambda_e != 0.0) {
    const GainMatrix k = gain_matrix(game, obs, state.theta_hat);
    next.theta_hat =
        game.model->theta_set().project_point(state.theta_hat + estimator_increment(next, e, k, h));
  }
  return next;
}

KappaEstimate kappa_estimate(const GameDefinition& game, const SampleGrid& grid) {
  if (grid.r_points.empty() || grid.theta_points.empty()) throw InputError("kappa_estimate: empty sample grid");
  KappaEstimate out;
  out.grid = grid.description;
  for (const Vec& r : grid.r_points) {
    const Vec f = game.follower.respond(r);
    for (const Vec& th : grid.theta_points) {
      const Vec a_hat = predicted_response(*game.model, th, r);
      const RowVec g = segment_cost_gradient(game, r, f, a_hat);
      out.kappa = std::max(out.kappa, stacked_identity_norm(g));
      ++out.samples;
    }
  }
  return out;
}

MismatchReport mismatch_error_bound_check(const GameDefinition& game, const SampleGrid& grid,
                                          const Vec& theta_star, double eps_f) {
  if (!game.model->theta_set().contains(theta_star)) {
    throw PreconditionError("mismatch_error_bound_check: theta_star outside Theta");
  }
  MismatchReport rep;
  rep.eps_f = eps_f;
  rep.kappa = kappa_estimate(game, grid).kappa;
  for (const Vec& r : grid.r_points) {
    const Vec f = game.follower.respond(r);
    const Vec diff = predicted_response(*game.model, theta_star, r) - f;
    const double dn = diff.norm();
    rep.attained = std::max(rep.attained, rep.kappa * dn);
    for (const Vec& th : grid.theta_points) {
      const RowVec g = segment_cost_gradient(game, r, f, predicted_response(*game.model, th, r));
      const double bottom = g.dot(diff);
      rep.attained_sharp = std::max(rep.attained_sharp, std::sqrt(dn * dn + bottom * bottom));
    }
  }
  rep.holds = rep.attained <= eps_f;
  return rep;
}

}  // namespace asg
