#include "asg/ddos.hpp"

#include "asg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace asg::ddos {

namespace {

double clamp_unit(double x, double c0) { return std::clamp(x, 0.0, c0); }

int ipow(int base, int exp) {
  int out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

// Walks every grid point of the first L-1 leader coordinates at the given
// per-axis values; the last coordinate absorbs the remaining budget.
template <class Fn>
void for_each_leader_point(int links, double r_total, double c0, const std::vector<double>& axis, Fn&& fn) {
  const int free_dims = links - 1;
  std::vector<std::size_t> idx(static_cast<std::size_t>(free_dims), 0);
  Vec r(links);
  for (;;) {
    double partial = 0.0;
    for (int k = 0; k < free_dims; ++k) {
      r[k] = axis[idx[static_cast<std::size_t>(k)]];
      partial += r[k];
    }
    r[links - 1] = r_total - partial;
    if (r[links - 1] >= 0.0 && r[links - 1] <= c0) fn(r);
    int k = 0;
    for (; k < free_dims; ++k) {
      if (++idx[static_cast<std::size_t>(k)] < axis.size()) break;
      idx[static_cast<std::size_t>(k)] = 0;
    }
    if (k == free_dims) break;
  }
}

}  // namespace

void DdosScenario::validate() const {
  if (links < 1) throw InputError("scenario: links must be >= 1");
  if (!(c0 > 0.0)) throw InputError("scenario: c0 must be positive");
  if (!(r_total > 0.0 && r_total <= links * c0)) throw InputError("scenario: R_total must lie in (0, L c0]");
  if (!(a_total > 0.0 && a_total <= links * c0)) throw InputError("scenario: A_total must lie in (0, L c0]");
  if (weights.size() != links) throw InputError("scenario: weights must have one entry per link");
  for (Eigen::Index l = 0; l < weights.size(); ++l) {
    if (!(weights[l] > 0.0)) throw InputError("scenario: weights must be positive");
  }
}

DdosScenario DdosScenario::standard(int links, double c0) {
  DdosScenario sc;
  sc.links = links;
  sc.c0 = c0;
  sc.r_total = links * c0 / 2.0;
  sc.a_total = std::ceil(links * c0 / 2.0);
  sc.weights = Vec::Ones(links);
  return sc;
}

int DdosScenario::flooded_links() const {
  const double k = a_total / c0;
  const double rounded = std::round(k);
  if (std::abs(k - rounded) > 1e-9) {
    throw UnsupportedError("attack budget A_total = " + std::to_string(a_total) +
                           " is not a multiple of the link capacity");
  }
  return static_cast<int>(rounded);
}

Vec legit_traffic(const Vec& r, const Vec& a, double c0) {
  Vec u(r.size());
  for (Eigen::Index l = 0; l < r.size(); ++l) {
    u[l] = std::min(clamp_unit(r[l], c0), std::max(c0 - clamp_unit(a[l], c0), 0.0));
  }
  return u;
}

double router_cost(const Vec& r, const Vec& a, const DdosScenario& sc) { return -legit_traffic(r, a, sc.c0).sum(); }

double attacker_cost(const Vec& a, const Vec& r, const DdosScenario& sc) {
  return sc.weights.dot(legit_traffic(r, a, sc.c0));
}

RouterCostGradient grad_router_cost(const Vec& r, const Vec& a, double c0) {
  const auto n = r.size();
  RouterCostGradient g{RowVec::Zero(n), RowVec::Zero(n)};
  for (Eigen::Index l = 0; l < n; ++l) {
    const double rl = clamp_unit(r[l], c0);
    const double room = c0 - clamp_unit(a[l], c0);
    if (rl < std::max(room, 0.0)) g.grad_r[l] = -1.0;
    if (room > 0.0 && room <= rl) g.grad_a[l] = 1.0;
  }
  return g;
}

RowVec router_cost_segment_gradient(const Vec& r, const Vec& a0, const Vec& a1, double c0) {
  const auto n = r.size();
  RowVec g = RowVec::Zero(n);
  for (Eigen::Index l = 0; l < n; ++l) {
    const double lo = c0 - clamp_unit(r[l], c0);
    const double hi = c0;
    const double start = clamp_unit(a0[l], c0);
    const double slope = clamp_unit(a1[l], c0) - start;
    if (slope == 0.0) {
      g[l] = (start >= lo && start < hi) ? 1.0 : 0.0;
      continue;
    }
    double t0 = (lo - start) / slope;
    double t1 = (hi - start) / slope;
    if (t0 > t1) std::swap(t0, t1);
    g[l] = std::max(0.0, std::min(1.0, t1) - std::max(0.0, t0));
  }
  return g;
}

Vec attacker_best_response(const Vec& r, const DdosScenario& sc) {
  const int k = sc.flooded_links();
  const auto n = r.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return sc.weights[i] * r[i] > sc.weights[j] * r[j];
  });
  Vec a = Vec::Zero(n);
  for (int i = 0; i < std::min<int>(k, static_cast<int>(n)); ++i) a[order[static_cast<std::size_t>(i)]] = sc.c0;
  return a;
}

QuasiRbfModel::QuasiRbfModel(int links, int n_rbf, double c0, double r_total)
    : links_(links),
      n_rbf_(n_rbf),
      c0_(c0),
      cells_(ipow(n_rbf, links - 1)),
      theta_set_(ConvexSet::uniform_box(links * ipow(n_rbf, links - 1), 0.0, c0)),
      r_set_(ConvexSet::simplex(r_total, links)) {
  if (links < 1) throw InputError("rbf model: links must be >= 1");
  if (n_rbf < 1) throw InputError("rbf model: n_rbf must be >= 1");
}

int QuasiRbfModel::cell_of(const Vec& r) const {
  const double half = c0_ / (2.0 * n_rbf_);
  int flat = 0;
  int stride = 1;
  for (int k = 0; k < links_ - 1; ++k) {
    const double x = r[k];
    // Candidate from the grid position, confirmed against the kernel support
    // (-half, half] around its center so boundaries follow the indicator.
    const int guess = static_cast<int>(std::ceil(x * n_rbf_ / c0_));
    int found = -1;
    for (int j = std::max(guess - 1, 1); j <= std::min(guess + 1, n_rbf_); ++j) {
      const double center = (2.0 * j - 1.0) * c0_ / (2.0 * n_rbf_);
      const double off = x - center;
      if (off > -half && off <= half) {
        found = j;
        break;
      }
    }
    if (found < 0) return -1;
    flat += (found - 1) * stride;
    stride *= n_rbf_;
  }
  return flat;
}

std::vector<int> QuasiRbfModel::cell_indices(int cell) const {
  std::vector<int> j(static_cast<std::size_t>(links_ - 1));
  for (int k = 0; k < links_ - 1; ++k) {
    j[static_cast<std::size_t>(k)] = cell % n_rbf_ + 1;
    cell /= n_rbf_;
  }
  return j;
}

Vec QuasiRbfModel::cell_center(int cell) const {
  const auto j = cell_indices(cell);
  Vec c(links_ - 1);
  for (int k = 0; k < links_ - 1; ++k) {
    c[k] = (2.0 * j[static_cast<std::size_t>(k)] - 1.0) * c0_ / (2.0 * n_rbf_);
  }
  return c;
}

SparseMat QuasiRbfModel::jac_theta(const Vec& r) const {
  SparseMat jt(links_, n_theta());
  const int cell = cell_of(r);
  if (cell < 0) return jt;
  jt.reserve(Eigen::VectorXi::Constant(links_, 1));
  for (int l = 0; l < links_; ++l) jt.insert(l, theta_index(l, cell)) = 1.0;
  jt.makeCompressed();
  return jt;
}

Mat QuasiRbfModel::jac_r(const Vec&, const Vec&) const { return Mat::Zero(links_, links_); }

Vec QuasiRbfModel::eval(const Vec& theta_hat, const Vec& r) const {
  Vec out = Vec::Zero(links_);
  const int cell = cell_of(r);
  if (cell < 0) return out;
  for (int l = 0; l < links_; ++l) out[l] = theta_hat[theta_index(l, cell)];
  return out;
}

std::shared_ptr<QuasiRbfModel> build_rbf_model(int links, int n_rbf, double c0, double r_total) {
  return std::make_shared<QuasiRbfModel>(links, n_rbf, c0, r_total);
}

Vec ground_truth_theta(const DdosScenario& sc, const QuasiRbfModel& model) {
  Vec theta(model.n_theta());
  for (int cell = 0; cell < model.cell_count(); ++cell) {
    Vec r(sc.links);
    const Vec center = model.cell_center(cell);
    r.head(sc.links - 1) = center;
    r[sc.links - 1] = sc.r_total - center.sum();
    const Vec a = attacker_best_response(r, sc);
    for (int l = 0; l < sc.links; ++l) theta[model.theta_index(l, cell)] = a[l];
  }
  return theta;
}

double representation_gap(const DdosScenario& sc, const QuasiRbfModel& model, const Vec& theta,
                          int resolution) {
  // Midpoints of a grid whose spacing divides the kernel width never land on
  // a cell boundary.
  const int per_cell = std::max(1, (resolution + model.n_rbf() - 1) / model.n_rbf());
  const int points = per_cell * model.n_rbf();
  std::vector<double> axis(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) axis[static_cast<std::size_t>(k)] = (k + 0.5) * sc.c0 / points;
  double gap = 0.0;
  for_each_leader_point(sc.links, sc.r_total, sc.c0, axis, [&](const Vec& r) {
    gap = std::max(gap, (model.eval(theta, r) - attacker_best_response(r, sc)).norm());
  });
  return gap;
}

FollowerStrategy make_follower(const DdosScenario& sc, const QuasiRbfModel& model) {
  sc.validate();
  FollowerStrategy f;
  f.respond = [sc](const Vec& r) { return attacker_best_response(r, sc); };
  f.cost = [sc](const Vec& a, const Vec& r) { return attacker_cost(a, r, sc); };
  f.true_theta = ground_truth_theta(sc, model);
  const int resolution = sc.links <= 2 ? 4000 : 200;
  f.matched = representation_gap(sc, model, *f.true_theta, resolution) == 0.0;
  f.label = "best-response";
  return f;
}

GameDefinition make_game(const DdosScenario& sc, std::shared_ptr<const QuasiRbfModel> model) {
  sc.validate();
  GameDefinition g{.leader_set = ConvexSet::simplex(sc.r_total, sc.links),
                   .cost = {},
                   .grad_r_cost = {},
                   .grad_a_cost = {},
                   .segment_grad_a = {},
                   .follower = make_follower(sc, *model),
                   .model = std::move(model)};
  const double c0 = sc.c0;
  g.cost = [sc](const Vec& r, const Vec& a) { return router_cost(r, a, sc); };
  g.grad_r_cost = [c0](const Vec& r, const Vec& a) { return grad_router_cost(r, a, c0).grad_r; };
  g.grad_a_cost = [c0](const Vec& r, const Vec& a) { return grad_router_cost(r, a, c0).grad_a; };
  g.segment_grad_a = [c0](const Vec& r, const Vec& a0, const Vec& a1) {
    return router_cost_segment_gradient(r, a0, a1, c0);
  };
  return g;
}

}  // namespace asg::ddos
