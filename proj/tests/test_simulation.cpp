#include "asg/ddos.hpp"
#include "asg/errors.hpp"
#include "asg/report.hpp"
#include "asg/simulation.hpp"
#include "helpers.hpp"

#include <sstream>

using namespace asg;

namespace {

struct L2 {
  ddos::DdosScenario sc = ddos::DdosScenario::standard(2);
  std::shared_ptr<ddos::QuasiRbfModel> model = ddos::build_rbf_model(2, 4, 1.0, 1.0);
  GameDefinition game = ddos::make_game(sc, model);
  Vec theta = ddos::ground_truth_theta(sc, *model);
};

SimConfig short_config(double horizon) {
  SimConfig c;
  c.horizon = horizon;
  c.step = 0.05;
  c.seed = 3;
  return c;
}

}  // namespace

TEST_SUITE("simulation-engine") {
  TEST_CASE("zero horizon logs only the initial record") {
    L2 g;
    const RunResult res = run(g.game, short_config(0.0));
    CHECK(res.log.size() == 1);
    CHECK(res.log.t[0] == 0.0);
  }

  TEST_CASE("config validation") {
    SimConfig c = short_config(10);
    c.step = 0.0;
    CHECK_THROWS_AS(c.validate(), InputError);
    c = short_config(-1);
    CHECK_THROWS_AS(c.validate(), InputError);
    c = short_config(10);
    c.estimator.eps_obs_prime = 0.003;
    CHECK_THROWS_AS(c.validate(), InputError);
    c = short_config(10);
    c.record_stride = 0;
    CHECK_THROWS_AS(c.validate(), InputError);
    PEConfig pe;
    pe.tau0 = 0;
    CHECK_THROWS_AS(pe.validate(), InputError);
    DitherSpec d;
    d.amplitude = -1;
    CHECK_THROWS_AS(d.validate(), InputError);
  }

  TEST_CASE("timestamps, feasibility and reproducibility") {
    L2 g;
    const SimConfig c = short_config(300);
    const RunResult a = run(g.game, c);
    const RunResult b = run(g.game, c);
    REQUIRE(a.log.size() == static_cast<std::size_t>(c.step_count() + 1));
    for (std::size_t i = 1; i < a.log.size(); ++i) CHECK(a.log.t[i] == doctest::Approx(i * c.step).epsilon(1e-12));
    for (std::size_t i = 0; i < a.log.size(); i += 97) CHECK(g.game.leader_set.contains(a.log.r_at(i)));
    std::ostringstream sa, sb;
    write_trajectory_csv(a.log, sa);
    write_trajectory_csv(b.log, sb);
    CHECK(sa.str() == sb.str());
    CHECK(a.log.theta_final == b.log.theta_final);
  }

  TEST_CASE("lambda transitions follow the hysteresis band") {
    L2 g;
    const RunResult res = run(g.game, short_config(2000));
    const auto& L = res.log;
    for (std::size_t i = 1; i < L.size(); ++i) {
      if (L.lambda_e[i] != L.lambda_e[i - 1]) {
        if (L.lambda_e[i] > 0) CHECK(L.e_norm[i] >= 0.002);
        else CHECK(L.e_norm[i] <= 0.001);
      }
    }
    CHECK(res.diagnostics.lyapunov_violations == 0);
    CHECK(res.diagnostics.decrease_violations == 0);
    CHECK(res.diagnostics.dwell_ok);
  }

  TEST_CASE("settling time") {
    TrajectoryLog log;
    log.step = 1.0;
    log.t = {0, 1, 2, 3};
    log.lambda_e = {0, 0, 0, 0};
    log.theta_step = {0, 0, 0, 0};
    CHECK(settling_time(log) == 0.0);
    log.lambda_e = {0.02, 0.02, 0, 0};
    log.theta_step = {0.1, 0.1, 0, 0};
    CHECK(settling_time(log) == 2.0);
    log.lambda_e = {0, 0, 0, 0.02};
    log.theta_step = {0, 0, 0, 0.1};
    CHECK_FALSE(settling_time(log).has_value());
  }

  TEST_CASE("matched two-link run settles and halving h agrees") {
    L2 g;
    SimConfig c = short_config(3000);
    c.seed = 1;
    const RunResult coarse = run(g.game, c);
    REQUIRE(coarse.log.settling.has_value());
    CHECK(*coarse.log.settling < 3000);
    CHECK(coarse.log.e_norm.back() < 0.002);
    c.step = 0.025;
    const RunResult fine = run(g.game, c);
    REQUIRE(fine.log.settling.has_value());
    CHECK(max_abs_diff(coarse.log.r_final, fine.log.r_final) < 0.01);
    CHECK(fine.log.j.back() == doctest::Approx(coarse.log.j.back()).epsilon(0.02));
  }

  TEST_CASE("pe gramian") {
    L2 g;
    SimConfig c = short_config(200);
    c.initial_r = vec({0.3, 0.7});
    c.initial_theta = Vec::Constant(8, 0.5);
    c.lambda_r = 1e-12;  // r stays inside one cell
    c.estimator.lambda_theta = 1e-12;
    const RunResult res = run(g.game, c);
    PEConfig pe;
    pe.tau0 = 100;
    pe.mode = GramianMode::simplified;
    pe.excited_only = false;
    const GramianReport all = pe_gramian(res.log, 0.0, pe, g.game);
    CHECK(all.coords.size() == 8);
    CHECK(all.min_eig == doctest::Approx(0.0));
    pe.excited_only = true;
    const GramianReport cell = pe_gramian(res.log, 0.0, pe, g.game);
    REQUIRE(cell.coords.size() == 2);
    CHECK(cell.min_eig == doctest::Approx(100.0).epsilon(1e-9));
    // Full mode with K constant: tau0 K^T K.
    pe.mode = GramianMode::full;
    const GramianReport full = pe_gramian(res.log, 0.0, pe, g.game);
    const Vec r = c.initial_r.value();
    const Vec a = g.game.follower.respond(r);
    const Mat K = gain_matrix(g.game, {r, a, g.game.cost(r, a)}, *c.initial_theta).dense();
    Mat expect(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) expect(i, j) = 100.0 * K.col(full.coords[i]).dot(K.col(full.coords[j]));
    CHECK((full.gramian - expect).norm() < 1e-9);

    CHECK_THROWS_AS(pe_gramian(res.log, 150.0, pe, g.game), InputError);
  }

  TEST_CASE("bad or empty coordinate subsets are rejected") {
    L2 g;
    SimConfig c = short_config(120);
    c.initial_r = vec({0.0, 1.0});  // outside every kernel: nothing is excited
    GameDefinition frozen = g.game;
    frozen.grad_r_cost = [](const Vec& r, const Vec&) -> RowVec { return RowVec::Zero(r.size()); };
    const RunResult res = run(frozen, c);
    PEConfig pe;
    CHECK_THROWS_AS(pe_gramian(res.log, 0.0, pe, frozen), InputError);
    pe.excited_only = false;
    pe.subset = {-1};
    CHECK_THROWS_AS(pe_gramian(res.log, 0.0, pe, frozen), InputError);
    pe.subset = {8};
    CHECK_THROWS_AS(pe_gramian(res.log, 0.0, pe, frozen), InputError);
    pe.subset = {0, 4};
    CHECK(pe_gramian(res.log, 0.0, pe, frozen).min_eig == 0.0);
  }

  TEST_CASE("dither") {
    const ConvexSet R = ConvexSet::simplex(1.0, 2);
    DitherSpec d;
    Rng rng(1);
    CHECK(dither(R, vec({0.3, 0.7}), d, rng) == vec({0.3, 0.7}));
    d.amplitude = 0.3;
    Rng r1(5), r2(5);
    for (int k = 0; k < 100; ++k) {
      const Vec x = dither(R, vec({0.3, 0.7}), d, r1);
      CHECK(R.contains(x));
      CHECK(x == dither(R, vec({0.3, 0.7}), d, r2));
    }
  }

  TEST_CASE("dither episodes start when the estimator switches off") {
    L2 g;
    SimConfig c = short_config(3000);
    c.seed = 1;
    c.pe = PEConfig{};
    DitherSpec d;
    d.amplitude = 0.1 * g.game.leader_set.diameter();
    c.dither = d;
    const RunResult res = run(g.game, c);
    REQUIRE_FALSE(res.log.dither_episodes.empty());
    for (const auto& [start, end] : res.log.dither_episodes) CHECK(end - start == doctest::Approx(50.0));
  }

  TEST_CASE("block gramian") {
    BlockGramian b;
    b.add({0, 1}, Mat::Identity(2, 2), 2.0);
    b.add({3}, Mat::Constant(1, 1, 5.0), 1.0);
    CHECK(b.min_eig_excited() == doctest::Approx(2.0));
    CHECK(b.excited_coords() == std::vector<int>{0, 1, 3});
    b.add({0, 1}, Mat::Identity(2, 2), -2.0);
    CHECK(b.excited_coords() == std::vector<int>{3});
    CHECK(b.min_eig_excited() == doctest::Approx(5.0));
    // a contribution spanning two blocks merges them
    b.add({1, 3}, Mat::Ones(2, 2), 1.0);
    CHECK(b.restricted({1, 3})(0, 1) == doctest::Approx(1.0));
    CHECK(b.restricted({0, 1, 3}).rows() == 3);
  }
}
