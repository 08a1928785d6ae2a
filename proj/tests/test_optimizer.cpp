#include "asg/ddos.hpp"
#include "asg/optimizer.hpp"
#include "asg/random.hpp"
#include "asg/verify.hpp"
#include "helpers.hpp"

using namespace asg;

TEST_SUITE("optimizer") {
  TEST_CASE("leader step on the two-link game") {
    const auto sc = ddos::DdosScenario::standard(2);
    const auto model = ddos::build_rbf_model(2, 4, 1.0, 1.0);
    const GameDefinition game = ddos::make_game(sc, model);
    // theta_hat predicting a flood on link 1 everywhere
    Vec th = Vec::Zero(8);
    th.head(4).setOnes();
    const Vec r = vec({0.8, 0.2});
    const OptimizerConfig cfg{0.002, 0.05};
    const Vec next = leader_step(game, r, th, cfg);
    CHECK_VEC_NEAR(next - r, vec({-0.5, 0.5}) * (cfg.step * cfg.lambda_r), 1e-15);
    CHECK(game.leader_set.contains(next));
  }

  TEST_CASE("zero gradient leaves r in place") {
    SmoothTestGame s = smooth_test_game(3);
    s.game.grad_r_cost = [](const Vec& r, const Vec&) -> RowVec { return RowVec::Zero(r.size()); };
    s.game.grad_a_cost = [](const Vec&, const Vec& a) -> RowVec { return RowVec::Zero(a.size()); };
    const Vec r = vec({0.2, 0.3, 0.5});
    CHECK(leader_step(s.game, r, Vec::Zero(4), {0.1, 0.1}) == r);
    CHECK(stationarity_residual(s.game, r, Vec::Zero(4)) == 0.0);
  }

  TEST_CASE("interior step is a plain gradient step") {
    SmoothTestGame s = smooth_test_game(3);
    const Vec r = vec({0.2, 0.3, 0.5});
    const Vec th = Vec::Constant(4, 0.2);
    RowVec g = predicted_cost_grad_r(s.game, r, th);
    g.array() -= g.mean();  // component along the simplex
    const Vec next = leader_step(s.game, r, th, {0.01, 0.1});
    CHECK_VEC_NEAR(next, r - 0.001 * g.transpose(), 1e-14);
  }

  TEST_CASE("stationarity at a vertex with an outward gradient") {
    SmoothTestGame s = smooth_test_game(3);
    s.game.grad_r_cost = [](const Vec&, const Vec&) -> RowVec { RowVec g(3); g << -1, 0, 0; return g; };
    s.game.grad_a_cost = [](const Vec&, const Vec& a) -> RowVec { return RowVec::Zero(a.size()); };
    CHECK(stationarity_residual(s.game, vec({1, 0, 0}), Vec::Zero(4)) == 0.0);
  }

  TEST_CASE("two-link equilibrium is stationary under the kink convention") {
    const auto sc = ddos::DdosScenario::standard(2);
    const auto model = ddos::build_rbf_model(2, 4, 1.0, 1.0);
    const GameDefinition game = ddos::make_game(sc, model);
    const Vec theta = ddos::ground_truth_theta(sc, *model);
    CHECK(nonsmooth_stationarity_residual(game, vec({0.5, 0.5}), theta, 1e-3) < 1e-12);
  }

  TEST_CASE("min norm point in a hull") {
    Mat g(2, 2);
    g << 1, -1, 1, 1;
    CHECK_VEC_NEAR(min_norm_in_hull(g), vec({0, 1}), 1e-9);
  }

  TEST_CASE("descent with frozen theta") {
    const SmoothTestGame s = smooth_test_game(5);
    Rng rng(1);
    const Vec th = rng.in_set(s.game.model->theta_set());
    Vec r = rng.in_set(s.game.leader_set);
    const OptimizerConfig cfg{0.05, 0.05};
    for (int k = 0; k < 500; ++k) {
      const Vec next = leader_step(s.game, r, th, cfg);
      CHECK(s.game.leader_set.contains(next));
      CHECK(predicted_cost(s.game, next, th) <= predicted_cost(s.game, r, th) + 1e-12);
      r = next;
    }
    CHECK(stationarity_residual(s.game, r, th) < 1e-3);
  }
}
