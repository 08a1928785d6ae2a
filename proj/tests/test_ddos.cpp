#include "asg/ddos.hpp"
#include "asg/errors.hpp"
#include "asg/random.hpp"
#include "helpers.hpp"

using namespace asg;
using namespace asg::ddos;

TEST_SUITE("ddos-game") {
  TEST_CASE("legitimate traffic") {
    CHECK_VEC_NEAR(legit_traffic(vec({0.5, 0.5, 0.9}), vec({1, 0, 0.4}), 1.0), vec({0, 0.5, 0.6}), 1e-15);
  }

  TEST_CASE("costs") {
    DdosScenario sc = DdosScenario::standard(2);
    CHECK(router_cost(vec({0.5, 0.5}), vec({0, 1}), sc) == -0.5);
    CHECK(attacker_cost(vec({0, 1}), vec({0.5, 0.5}), sc) == 0.5);
    CHECK(router_cost(vec({0.3, 0.7}), vec({0, 0}), sc) == -1.0);
    sc.weights = vec({1, 1.0 / 3});
    CHECK(router_cost(vec({0.25, 0.75}), vec({1, 0}), sc) == -0.75);
    CHECK(attacker_cost(vec({1, 0}), vec({0.25, 0.75}), sc) == doctest::Approx(0.25));
  }

  TEST_CASE("zero-sum identity") {
    const DdosScenario sc = DdosScenario::standard(3);
    Rng rng(1);
    for (int k = 0; k < 100; ++k) {
      const Vec r = rng.in_set(ConvexSet::simplex(1.5, 3));
      const Vec a = rng.in_set(ConvexSet::simplex(2.0, 3));
      CHECK(attacker_cost(a, r, sc) == -router_cost(r, a, sc));
    }
  }

  TEST_CASE("cost gradient") {
    const auto g = grad_router_cost(vec({0.3, 0.5}), vec({0, 1}), 1.0);
    CHECK(g.grad_r == RowVec(vec({-1, 0}).transpose()));
    CHECK(g.grad_a == RowVec(vec({0, 0}).transpose()));
    const auto h = grad_router_cost(vec({0.9, 0.5}), vec({0.4, 0.3}), 1.0);
    CHECK(h.grad_r == RowVec(vec({0, -1}).transpose()));
    CHECK(h.grad_a == RowVec(vec({1, 0}).transpose()));
  }

  TEST_CASE("segment gradient integrates the piecewise integrand") {
    Rng rng(2);
    for (int k = 0; k < 50; ++k) {
      const Vec r = rng.in_set(ConvexSet::uniform_box(3, 0.0, 1.0));
      const Vec a0 = rng.in_set(ConvexSet::uniform_box(3, 0.0, 1.0));
      const Vec a1 = rng.in_set(ConvexSet::uniform_box(3, 0.0, 1.0));
      const RowVec exact = router_cost_segment_gradient(r, a0, a1, 1.0);
      RowVec mid = RowVec::Zero(3);
      const int n = 20000;
      for (int i = 0; i < n; ++i) {
        const double rho = (i + 0.5) / n;
        mid += grad_router_cost(r, a0 + rho * (a1 - a0), 1.0).grad_a;
      }
      CHECK((exact - mid / n).cwiseAbs().maxCoeff() < 1e-3);
    }
  }

  TEST_CASE("best response") {
    DdosScenario sc = DdosScenario::standard(2);
    CHECK(attacker_best_response(vec({0.3, 0.7}), sc) == vec({0, 1}));
    sc.weights = vec({1, 1.0 / 3});
    CHECK(attacker_best_response(vec({0.8, 0.2}), sc) == vec({1, 0}));
    CHECK(attacker_best_response(vec({0.5, 0.5, 0.5}), DdosScenario::standard(3)) == vec({1, 1, 0}));
    DdosScenario odd = DdosScenario::standard(2);
    odd.a_total = 0.5;
    CHECK_THROWS_AS(attacker_best_response(vec({0.5, 0.5}), odd), UnsupportedError);
  }

  TEST_CASE("scenario validation") {
    DdosScenario sc = DdosScenario::standard(2);
    CHECK_NOTHROW(sc.validate());
    sc.weights = vec({1});
    CHECK_THROWS_AS(sc.validate(), InputError);
    sc = DdosScenario::standard(2);
    sc.c0 = 0;
    CHECK_THROWS_AS(sc.validate(), InputError);
  }

  TEST_CASE("quasi-RBF model") {
    const auto m2 = build_rbf_model(2, 4, 1.0, 1.0);
    CHECK(m2->n_theta() == 8);
    CHECK(m2->theta_set().contains(Vec::Ones(8)));
    const auto m3 = build_rbf_model(3, 20, 1.0, 1.5);
    CHECK(m3->n_theta() == 1200);
    // centers (2j - 1) c0 / (2 n); half-open cells ((j-1)/n, j/n]
    CHECK(m2->cell_of(vec({0.125, 0.875})) == 0);
    CHECK(m2->cell_of(vec({0.25, 0.75})) == 0);
    CHECK(m2->cell_of(vec({0.2500001, 0.75})) == 1);
    CHECK(m2->cell_of(vec({0.0, 1.0})) == -1);
    CHECK(m2->cell_center(3)[0] == 0.875);
    Vec th = Vec::Zero(8);
    th[m2->theta_index(1, 2)] = 0.7;
    CHECK_VEC_NEAR(m2->eval(th, vec({0.625, 0.375})), vec({0, 0.7}), 0.0);
    CHECK(m2->jac_r(th, vec({0.6, 0.4})).norm() == 0.0);
  }

  TEST_CASE("ground truth parameters") {
    DdosScenario sc = DdosScenario::standard(2);
    const auto m = build_rbf_model(2, 4, 1.0, 1.0);
    CHECK(ground_truth_theta(sc, *m) == vec({0, 0, 1, 1, 1, 1, 0, 0}));
    sc.weights = vec({1, 1.0 / 3});
    CHECK(ground_truth_theta(sc, *m) == vec({0, 1, 1, 1, 1, 0, 0, 0}));
    CHECK(representation_gap(sc, *m, ground_truth_theta(sc, *m), 400) == 0.0);
    CHECK(make_follower(sc, *m).matched);
  }

  TEST_CASE("three-link cell consistency") {
    const DdosScenario sc = DdosScenario::standard(3);
    const auto m = build_rbf_model(3, 20, 1.0, 1.5);
    const Vec th = ground_truth_theta(sc, *m);
    Rng rng(3);
    for (int k = 0; k < 200; ++k) {
      const Vec r = rng.in_set(ConvexSet::simplex(1.5, 3));
      const int cell = m->cell_of(r);
      if (cell < 0) continue;
      const Vec c = m->cell_center(cell);
      const Vec rc = vec({c[0], c[1], 1.5 - c[0] - c[1]});
      CHECK(m->eval(th, r) == attacker_best_response(rc, sc));
    }
    CHECK_FALSE(make_follower(sc, *m).matched);
  }
}
