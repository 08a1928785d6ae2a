#include "asg/convex_set.hpp"
#include "asg/ddos.hpp"
#include "asg/errors.hpp"
#include "asg/oracles.hpp"
#include "helpers.hpp"

using namespace asg;

TEST_SUITE("oracles") {
  TEST_CASE("grid points") {
    CHECK(grid_points(ConvexSet::uniform_box(2, 0, 1), {10}).size() == 121);
    CHECK(grid_points(ConvexSet::simplex(1, 3), {10}).size() == 66);
    CHECK_THROWS_AS(grid_points(ConvexSet::uniform_box(4, 0, 1), {10}), UnsupportedError);
    CHECK_THROWS_AS(grid_points(ConvexSet::uniform_box(2, 0, 1), {1}), InputError);
  }

  TEST_CASE("brute projections") {
    const ConvexSet s = ConvexSet::simplex(1, 2);
    CHECK_VEC_NEAR(brute_point_projection(s, vec({0.9, 0.5}), {1000}), vec({0.7, 0.3}), 1e-3);
    CHECK_VEC_NEAR(brute_projection(s, vec({0, 1}), vec({-1, 1}), {200}), vec({0, 0}), 2.0 / 200 * std::sqrt(2.0));
    const ConvexSet box = ConvexSet::uniform_box(2, 0, 1);
    CHECK_VEC_NEAR(brute_projection(box, vec({0.5, 0.5}), vec({0.3, -0.4}), {200}), vec({0.3, -0.4}), 0.5 * 2 / 200);
    CHECK_VEC_NEAR(brute_projection(box, vec({1, 1}), vec({1, 2}), {200}), vec({0, 0}), 1e-15);
    CHECK_THROWS_AS(brute_projection(ConvexSet::uniform_box(4, 0, 1), Vec::Zero(4), Vec::Ones(4), {10}),
                    UnsupportedError);
  }

  TEST_CASE("finite differences") {
    const Vec x = vec({0.3, -1.2, 2.0});
    CHECK(finite_diff_gradient([](const Vec&) { return 4.0; }, x, 1e-4).norm() == 0.0);
    const RowVec g = finite_diff_gradient([](const Vec& v) { return v.squaredNorm(); }, x, 1e-4);
    CHECK((g - 2.0 * x.transpose()).norm() < 1e-9);
    CHECK_THROWS_AS(finite_diff_gradient([](const Vec&) { return 0.0; }, x, 0.0), InputError);
  }

  TEST_CASE("best response sets include ties") {
    const auto sc = ddos::DdosScenario::standard(3);
    CHECK(ddos::best_response_set(vec({0.5, 0.5, 0.5}), sc).size() == 3);
    CHECK(ddos::best_response_set(vec({0.4, 0.5, 0.6}), sc).size() == 1);
  }

  TEST_CASE("grid Stackelberg on the zero-sum games") {
    const auto s2 = ddos::grid_stackelberg(ddos::DdosScenario::standard(2), {200}, 0.0);
    CHECK_VEC_NEAR(s2.r_star, vec({0.5, 0.5}), 1e-12);
    CHECK(s2.j_star == doctest::Approx(-0.5));
    CHECK(s2.is_epsilon_action);
    const auto s3 = ddos::grid_stackelberg(ddos::DdosScenario::standard(3), {200}, 0.0);
    CHECK_VEC_NEAR(s3.r_star, vec({0.5, 0.5, 0.5}), 1e-12);
    CHECK(s3.j_star == doctest::Approx(-0.5));
  }

  TEST_CASE("weighted two-link game approaches -0.75 from above") {
    auto sc = ddos::DdosScenario::standard(2);
    sc.weights = vec({1, 1.0 / 3});
    double prev = 1.0;
    for (int res : {50, 100, 200, 400}) {
      const auto s = ddos::grid_stackelberg(sc, {res}, 0.01);
      CHECK(s.j_star <= prev);
      CHECK(s.j_star > -0.75);
      prev = s.j_star;
    }
    CHECK(prev < -0.74);
  }

  TEST_CASE("single link") {
    ddos::DdosScenario sc;
    sc.links = 1;
    sc.r_total = 0.5;
    sc.a_total = 1.0;
    sc.weights = vec({1});
    CHECK(ddos::grid_stackelberg(sc, {10}, 0.0).j_star == 0.0);
  }

  TEST_CASE("three-link weighted game") {
    auto sc = ddos::DdosScenario::standard(3);
    sc.weights = vec({1, 0.75, 1});
    const auto s = ddos::grid_stackelberg(sc, {200}, 0.01);
    CHECK(s.j_star > -0.6);
    CHECK(s.j_star < -0.59);
    CHECK(std::abs(s.r_star[1] - 0.6) < 0.02);
  }
}
