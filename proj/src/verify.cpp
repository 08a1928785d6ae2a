#include "asg/verify.hpp"

#include "asg/errors.hpp"
#include "asg/oracles.hpp"
#include "asg/random.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace asg {

namespace {

Mat random_matrix(Rng& rng, int rows, int cols) {
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
  }
  return m;
}

Vec random_vec(Rng& rng, int n, double lo, double hi) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

ConvexSet random_set(Rng& rng, int kind) {
  const int dim = 1 + static_cast<int>(rng.uniform() * 5);
  switch (kind % 3) {
    case 0: {
      Vec lo = random_vec(rng, dim, -1.0, 0.5);
      Vec hi = lo + random_vec(rng, dim, 0.0, 1.5);
      return ConvexSet::box(lo, hi);
    }
    case 1:
      return ConvexSet::simplex(rng.uniform(0.2, 2.0), dim);
    default:
      return ConvexSet::product({ConvexSet::uniform_box(dim, 0.0, 1.0), ConvexSet::simplex(1.5, 3)});
  }
}

// Half the draws land on the boundary, where the cones are non-trivial.
Vec sample_point(Rng& rng, const ConvexSet& set) {
  if (rng.uniform() < 0.5) return rng.in_set(set);
  return set.project_point(random_vec(rng, set.dim(), -2.0, 3.0));
}

PropertyResult result(std::string name, double measured, double threshold, std::string detail = {}) {
  return {std::move(name), measured <= threshold, measured, threshold, std::move(detail)};
}

double rel_err(const RowVec& g, const RowVec& fd) { return (g - fd).norm() / std::max(1.0, fd.norm()); }

bool near_multiple(double x, double spacing, double tol) {
  const double q = x / spacing;
  return std::abs(q - std::round(q)) * spacing < tol;
}

// True when Ĵ(., theta_hat) and Ĵ(r, .) are affine in a neighbourhood of r.
bool ddos_smooth_point(const ddos::QuasiRbfModel& model, const Vec& theta_hat, const Vec& r, double tol) {
  const double c0 = model.c0();
  for (int k = 0; k < model.links() - 1; ++k) {
    if (near_multiple(r[k], c0 / model.n_rbf(), tol)) return false;
  }
  const Vec a_hat = model.eval(theta_hat, r);
  for (int l = 0; l < model.links(); ++l) {
    if (r[l] < tol || r[l] > c0 - tol) return false;
    if (std::abs(r[l] - (c0 - a_hat[l])) < tol) return false;
    if (a_hat[l] < tol || a_hat[l] > c0 - tol) return false;
  }
  return true;
}

}  // namespace

SmoothTestGame smooth_test_game(std::uint64_t seed, int n_r, int n_a, int n_theta) {
  Rng rng(seed);
  std::vector<Mat> m(static_cast<std::size_t>(n_r + 1));
  std::vector<Vec> b(static_cast<std::size_t>(n_r + 1));
  for (int i = 0; i <= n_r; ++i) {
    m[static_cast<std::size_t>(i)] = random_matrix(rng, n_a, n_theta);
    b[static_cast<std::size_t>(i)] = random_vec(rng, n_a, -1.0, 1.0);
  }
  const Mat qr = random_matrix(rng, n_r, n_r);
  const Mat q = qr * qr.transpose() + Mat::Identity(n_r, n_r);
  const Mat s = random_matrix(rng, n_a, n_r);
  const Mat pr = random_matrix(rng, n_a, n_a);
  const Mat p = pr * pr.transpose() + Mat::Identity(n_a, n_a);
  const Vec c = random_vec(rng, n_a, -1.0, 1.0);

  auto jac_theta = [m, n_r](const Vec& r) {
    Mat out = m[0];
    for (int i = 0; i < n_r; ++i) out += r[i] * m[static_cast<std::size_t>(i + 1)];
    return out;
  };
  auto jac_r = [m, b, n_r, n_a](const Vec& theta, const Vec&) {
    Mat out(n_a, n_r);
    for (int i = 0; i < n_r; ++i) {
      out.col(i) = m[static_cast<std::size_t>(i + 1)] * theta + b[static_cast<std::size_t>(i + 1)];
    }
    return out;
  };
  auto offset = [b, n_r](const Vec& r) {
    Vec out = b[0];
    for (int i = 0; i < n_r; ++i) out += r[i] * b[static_cast<std::size_t>(i + 1)];
    return out;
  };
  auto model = std::make_shared<FunctionalModel>(ConvexSet::uniform_box(n_theta, -1.0, 1.0),
                                                 ConvexSet::simplex(1.0, n_r), n_a, jac_theta, jac_r, offset);

  SmoothTestGame out;
  out.theta_true = rng.in_set(model->theta_set());
  out.game.leader_set = model->r_set();
  out.game.cost = [q, s, p, c](const Vec& r, const Vec& a) {
    return 0.5 * r.dot(q * r) + a.dot(s * r) + 0.5 * a.dot(p * a) + c.dot(a);
  };
  out.game.grad_r_cost = [q, s](const Vec& r, const Vec& a) -> RowVec { return (q * r + s.transpose() * a).transpose(); };
  out.game.grad_a_cost = [s, p, c](const Vec& r, const Vec& a) -> RowVec { return (s * r + p * a + c).transpose(); };
  const Vec theta = out.theta_true;
  out.game.follower.respond = [model, theta](const Vec& r) { return model->eval(theta, r); };
  out.game.follower.true_theta = theta;
  out.game.follower.matched = true;
  out.game.follower.label = "smooth";
  out.game.model = model;
  return out;
}

MismatchFollower bounded_mismatch_follower(const ddos::DdosScenario& sc, const ddos::QuasiRbfModel& model,
                                           const Vec& theta, double amplitude) {
  if (!(amplitude >= 0.0)) throw InputError("mismatch amplitude must be >= 0");
  auto shared = std::make_shared<ddos::QuasiRbfModel>(model);
  const double c0 = sc.c0;
  MismatchFollower out;
  out.follower.respond = [shared, theta, amplitude, c0](const Vec& r) {
    Vec a = shared->eval(theta, r);
    for (Eigen::Index l = 0; l < a.size(); ++l) {
      const double inward = a[l] > c0 / 2.0 ? -1.0 : 1.0;
      a[l] += inward * amplitude * (0.5 + 0.5 * std::sin(7.0 * r[0] + static_cast<double>(l)));
    }
    return a;
  };
  out.follower.cost = [sc](const Vec& a, const Vec& r) { return ddos::attacker_cost(a, r, sc); };
  out.follower.true_theta = theta;
  out.follower.matched = false;
  out.follower.label = "bounded mismatch";
  out.eps_f = std::sqrt(1.0 + sc.links) * std::sqrt(static_cast<double>(sc.links)) * amplitude;
  return out;
}

EstimatorIncrementFn sign_flipped_increment() {
  return [](const Vec&, const Vec& e, const GainMatrix& k, double h, double lambda) -> Vec {
    return (h * lambda) * k.apply_transpose(e);
  };
}

std::vector<PropertyResult> verify_properties(std::uint64_t seed) {
  std::vector<PropertyResult> out;
  Rng rng(seed);

  // Projection idempotence, variational inequality, tangent-cone identities.
  double idem = 0.0, vi = 0.0, orth = 0.0, normal = 0.0, interior = 0.0;
  for (int trial = 0; trial < 600; ++trial) {
    const ConvexSet set = random_set(rng, trial);
    const Vec v = random_vec(rng, set.dim(), -3.0, 3.0);
    const Vec p = set.project_point(v);
    idem = std::max(idem, (set.project_point(p) - p).norm());
    for (int k = 0; k < 10; ++k) vi = std::max(vi, (v - p).dot(rng.in_set(set) - p));

    const Vec x = sample_point(rng, set);
    const Vec q = set.project_tangent_cone(x, v);
    orth = std::max(orth, std::abs((v - q).dot(q)));
    for (int k = 0; k < 10; ++k) {
      const Vec w = sample_point(rng, set) - x;  // feasible direction
      normal = std::max(normal, (v - q).dot(w));
    }
    const Vec xi = rng.in_set(set);
    if (std::holds_alternative<Box>(set.shape())) {
      const auto& b = std::get<Box>(set.shape());
      const double gap = std::min((xi - b.lower).minCoeff(), (b.upper - xi).minCoeff());
      if (gap > 1e-6) interior = std::max(interior, (set.project_tangent_cone(xi, v) - v).cwiseAbs().maxCoeff());
    }
  }
  out.push_back(result("projection.idempotence", idem, 1e-12));
  out.push_back(result("projection.variational_inequality", vi, 1e-10));
  out.push_back(result("tangent_cone.orthogonality", orth, 1e-10));
  out.push_back(result("tangent_cone.normal_membership", normal, 1e-10));
  out.push_back(result("tangent_cone.interior_identity", interior, 0.0));

  // Brute-force oracles on small sets.
  {
    const std::vector<std::pair<ConvexSet, int>> cases = {{ConvexSet::uniform_box(2, 0.0, 1.0), 200},
                                                          {ConvexSet::simplex(1.0, 2), 200},
                                                          {ConvexSet::simplex(1.5, 3), 200},
                                                          {ConvexSet::uniform_box(3, 0.0, 1.0), 60}};
    double worst_tan = 0.0, worst_pt = 0.0;
    for (const auto& [set, res] : cases) {
      for (int k = 0; k < 12; ++k) {
        const Vec x = sample_point(rng, set);
        const Vec v = random_vec(rng, set.dim(), -1.0, 1.0);
        const Vec q = set.project_tangent_cone(x, v);
        const Vec qb = brute_projection(set, x, v, {res});
        worst_tan = std::max(worst_tan, (q - qb).norm() / (2.0 / res * std::max(v.norm(), 1e-12)));
        const Vec w = random_vec(rng, set.dim(), -1.0, 2.0);
        const double spacing = set.diameter() / res;
        worst_pt = std::max(worst_pt, (set.project_point(w) - brute_point_projection(set, w, {res})).norm() /
                                          (set.dim() * spacing));
      }
    }
    out.push_back(result("oracle.brute_tangent_projection", worst_tan, 1.0,
                         "ratio of disagreement to 2/resolution * |v|"));
    out.push_back(result("oracle.brute_point_projection", worst_pt, 1.0, "ratio of disagreement to dim * spacing"));
  }

  // Gain identity: e_obs = K (theta_hat - theta).
  {
    double worst = 0.0;
    for (int links : {2, 3}) {
      const auto sc = ddos::DdosScenario::standard(links);
      auto model = ddos::build_rbf_model(links, links == 2 ? 4 : 20, sc.c0, sc.r_total);
      const GameDefinition game = ddos::make_game(sc, model);
      for (int k = 0; k < 200; ++k) {
        const Vec r = rng.in_set(game.leader_set);
        const Vec th = rng.in_set(model->theta_set());
        const Vec th_hat = rng.in_set(model->theta_set());
        Observation obs{r, model->eval(th, r), 0.0};
        obs.j_obs = game.cost(r, obs.a);
        const Vec e = observation_error(game, obs, th_hat);
        worst = std::max(worst, (e - gain_matrix(game, obs, th_hat).apply(th_hat - th)).norm());
      }
    }
    const SmoothTestGame smooth = smooth_test_game(seed + 1);
    for (int k = 0; k < 200; ++k) {
      const Vec r = rng.in_set(smooth.game.leader_set);
      const Vec th = rng.in_set(smooth.game.model->theta_set());
      const Vec th_hat = rng.in_set(smooth.game.model->theta_set());
      Observation obs{r, smooth.game.model->eval(th, r), 0.0};
      obs.j_obs = smooth.game.cost(r, obs.a);
      const Vec e = observation_error(smooth.game, obs, th_hat);
      worst = std::max(worst, (e - gain_matrix(smooth.game, obs, th_hat).apply(th_hat - th)).norm());
    }
    out.push_back(result("estimator.gain_identity", worst, 1e-8));
  }

  // Analytic against finite-difference gradients at smooth points.
  {
    double worst = 0.0;
    int points = 0;
    const SmoothTestGame smooth = smooth_test_game(seed + 2);
    for (int k = 0; k < 500; ++k, ++points) {
      const Vec r = rng.in_set(smooth.game.leader_set);
      const Vec th = rng.in_set(smooth.game.model->theta_set());
      const CostGradients g = predicted_cost_gradients(smooth.game, r, th);
      const RowVec fr = finite_diff_gradient([&](const Vec& x) { return predicted_cost(smooth.game, x, th); }, r, 1e-5);
      const RowVec ft = finite_diff_gradient([&](const Vec& x) { return predicted_cost(smooth.game, r, x); }, th, 1e-5);
      worst = std::max({worst, rel_err(g.grad_r, fr), rel_err(g.grad_theta, ft)});
    }
    for (int links : {2, 3}) {
      const auto sc = ddos::DdosScenario::standard(links);
      auto model = ddos::build_rbf_model(links, links == 2 ? 4 : 20, sc.c0, sc.r_total);
      const GameDefinition game = ddos::make_game(sc, model);
      int done = 0;
      while (done < 250) {
        const Vec r = rng.in_set(game.leader_set);
        const Vec th = rng.in_set(model->theta_set());
        if (!ddos_smooth_point(*model, th, r, 1e-4)) continue;
        const CostGradients g = predicted_cost_gradients(game, r, th);
        const RowVec fr = finite_diff_gradient([&](const Vec& x) { return predicted_cost(game, x, th); }, r, 1e-6);
        const RowVec ft = finite_diff_gradient([&](const Vec& x) { return predicted_cost(game, r, x); }, th, 1e-6);
        worst = std::max({worst, rel_err(g.grad_r, fr), rel_err(g.grad_theta, ft)});
        ++done;
        ++points;
      }
    }
    out.push_back(result("gradients.finite_difference", worst, 1e-5, std::to_string(points) + " points"));
  }

  // Affinity of both model families.
  {
    const auto sc = ddos::DdosScenario::standard(2);
    auto rbf = ddos::build_rbf_model(2, 4, sc.c0, sc.r_total);
    const bool ok = affinity_check(*rbf, 200, seed) && affinity_check(*smooth_test_game(seed + 3).game.model, 200, seed);
    out.push_back(result("game.affinity", ok ? 0.0 : 1.0, 0.0));
  }

  // Best response optimality and the zero-sum identity.
  {
    double gap = 0.0, zero_sum = 0.0;
    for (int links : {1, 2, 3}) {
      auto sc = ddos::DdosScenario::standard(links);
      for (int k = 0; k < 300; ++k) {
        sc.weights = links == 1 ? Vec::Ones(1) : random_vec(rng, links, 0.1, 2.0);
        const Vec r = rng.in_set(ConvexSet::simplex(sc.r_total, links)).cwiseMin(sc.c0);
        const Vec a = ddos::attacker_best_response(r, sc);
        const auto all = ddos::best_response_set(r, sc, std::numeric_limits<double>::infinity());
        double best = std::numeric_limits<double>::infinity();
        for (const Vec& p : all) best = std::min(best, ddos::attacker_cost(p, r, sc));
        gap = std::max(gap, ddos::attacker_cost(a, r, sc) - best);
        auto zs = sc;
        zs.weights = Vec::Ones(links);
        zero_sum = std::max(zero_sum, std::abs(ddos::attacker_cost(a, r, zs) + ddos::router_cost(r, a, zs)));
      }
    }
    out.push_back(result("ddos.best_response_optimality", gap, 0.0));
    out.push_back(result("ddos.zero_sum_identity", zero_sum, 0.0));
  }

  // Matched-model certificate for two links.
  {
    for (const Vec& w : {Vec(Vec::Ones(2)), Vec((Vec(2) << 1.0, 1.0 / 3.0).finished())}) {
      auto sc = ddos::DdosScenario::standard(2);
      sc.weights = w;
      auto model = ddos::build_rbf_model(2, 4, sc.c0, sc.r_total);
      const double g = ddos::representation_gap(sc, *model, ddos::ground_truth_theta(sc, *model), 4000);
      out.push_back(result(w[1] == 1.0 ? "ddos.matched_certificate" : "ddos.matched_certificate_weighted", g, 0.0));
    }
  }

  // Hysteresis never switches inside the band.
  {
    EstimatorState st;
    long bad = 0;
    for (int k = 0; k < 20000; ++k) {
      const double e = rng.uniform(0.0, 0.004);
      const double next = switching_update(st, e);
      if (st.started && next != st.lambda_e) {
        if (next != 0.0 && e < st.params.eps_obs) ++bad;
        if (next == 0.0 && e > st.params.eps_obs_prime) ++bad;
      }
      st.lambda_e = next;
      st.started = true;
    }
    out.push_back(result("estimator.hysteresis_band", static_cast<double>(bad), 0.0));
  }

  // Grid Stackelberg on the zero-sum scenarios.
  for (int links : {2, 3}) {
    const auto sc = ddos::DdosScenario::standard(links);
    const StackelbergResult s = ddos::grid_stackelberg(sc, {200}, 0.0);
    const Vec target = Vec::Constant(links, sc.r_total / links);
    const double j_expected = -(links - sc.flooded_links()) * sc.r_total / links;
    std::ostringstream d;
    d << "r* = (" << s.r_star.transpose() << "), J* = " << s.j_star;
    out.push_back(result("oracle.grid_stackelberg_L" + std::to_string(links),
                         std::max((s.r_star - target).cwiseAbs().maxCoeff(), std::abs(s.j_star - j_expected)), 1e-12,
                         d.str()));
  }
  return out;
}

std::vector<PropertyResult> verify_run(const std::string& name, const RunResult& result_in, const RunSummary& summary) {
  const RunDiagnostics& d = result_in.diagnostics;
  std::vector<PropertyResult> out;
  out.push_back(result(name + ".lyapunov", static_cast<double>(d.lyapunov_violations), 0.0,
                       std::to_string(d.lyapunov_steps) + " active steps checked"));
  out.push_back(result(name + ".lyapunov_decrease", static_cast<double>(d.decrease_violations), 0.0,
                       std::to_string(d.decrease_steps) + " steps checked, " + std::to_string(d.decrease_skipped) +
                           " skipped where ||e_f|| > ||e_obs||"));
  {
    std::ostringstream s;
    s << d.activations << " activations, min gap " << d.min_activation_gap << ", bound " << d.dwell_bound;
    out.push_back({name + ".dwell_time", d.dwell_ok, d.min_activation_gap, d.dwell_bound, s.str()});
  }
  out.push_back(result(name + ".bounded", d.all_finite ? 0.0 : 1.0, 0.0));
  if (summary.settling) {
    out.push_back(result(name + ".stationarity", summary.stationarity_nonsmooth, 1e-3, "nonsmooth residual at horizon"));
  }
  return out;
}

PropertyResult verify_mutation_detected(std::uint64_t seed) {
  const auto sc = ddos::DdosScenario::standard(2);
  auto model = ddos::build_rbf_model(2, 4, sc.c0, sc.r_total);
  const GameDefinition game = ddos::make_game(sc, model);
  SimConfig cfg;
  cfg.horizon = 200.0;
  cfg.seed = seed;
  cfg.estimator_override = sign_flipped_increment();
  const RunResult r = run(game, cfg);
  PropertyResult p;
  p.name = "mutation.sign_flip_detected";
  p.measured = static_cast<double>(r.diagnostics.lyapunov_violations);
  p.threshold = 1.0;
  p.pass = r.diagnostics.lyapunov_violations >= 1;
  p.detail = "Lyapunov violations with the flipped estimator field";
  return p;
}

std::string format_property(const PropertyResult& p) {
  std::ostringstream s;
  s << (p.pass ? "PASS " : "FAIL ") << p.name << "  measured=" << p.measured << "  threshold=" << p.threshold;
  if (!p.detail.empty()) s << "  (" << p.detail << ")";
  return s.str();
}

}  // namespace asg
