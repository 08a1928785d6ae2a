#include "asg/errors.hpp"
#include "asg/report.hpp"
#include "asg/scenario_config.hpp"
#include "helpers.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace asg;

namespace {

const char* kBase = R"({
  "scenario": { "links": 2, "c0": 1.0, "n_rbf": 4 },
  "sim": { "horizon": 20, "step": 0.05, "seed": 4, "initial_r": [0.3, 0.7], "initial_theta": "zero" },
  "output": { "directory": "t", "formats": ["csv", "summary"] }
})";

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text, "x");
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("default scenario constants") {
    const ScenarioFile f = parse_scenario(kBase, "base");
    CHECK(f.scenario.r_total == 1.0);
    CHECK(f.scenario.a_total == 1.0);
    CHECK(f.sim.estimator.lambda_theta == 0.02);
    CHECK(f.sim.estimator.eps_obs == 0.002);
    CHECK(f.sim.estimator.eps_obs_prime == 0.001);
    CHECK(f.sim.lambda_r == 0.002);
    CHECK(f.sim.initial_theta.value() == Vec::Zero(8));
    CHECK_FALSE(f.write_plots);
  }

  TEST_CASE("validation errors") {
    CHECK(error_of(R"({"scenario": {"links": 2}, "sim": {"eps_obs": 0.001, "eps_obs_prime": 0.002}})") != "");
    const std::string both = error_of(R"({"scenario": {"links": 2, "colour": 1}, "sim": {"speed": 3}})");
    CHECK(both.find("colour") != std::string::npos);
    CHECK(both.find("speed") != std::string::npos);
    CHECK(error_of(R"({"scenario": {"links": 2}, "pe": {"subset": "some"}})") != "");
    CHECK(error_of(R"({"scenario": {"links": 2}, "switches": [{"time": 5, "weights": [1]}]})") != "");
    CHECK(error_of(R"({"scenario": {"links": 2}, "sim": {"initial_r": [0.9, 0.9]}})") != "");
    CHECK(error_of("{ not json") != "");
    CHECK(error_of(R"({"scenario": {"links": 2}, "extra": {}})") != "");
  }

  TEST_CASE("switches build one follower per phase") {
    const std::string text = R"({
      "scenario": { "links": 2, "n_rbf": 4 },
      "sim": { "horizon": 20 },
      "switches": [ { "time": 10, "weights": [1, 0.3333333333333333] } ]
    })";
    const BuiltScenario b = build_scenario(parse_scenario(text, "s"));
    REQUIRE(b.phases.size() == 2);
    REQUIRE(b.sim.switches.switches.size() == 1);
    CHECK(b.sim.switches.switches[0].time == 10.0);
    CHECK(b.sim.switches.switches[0].follower.true_theta.value() == vec({0, 1, 1, 1, 1, 0, 0, 0}));
  }

  TEST_CASE("default dither amplitude is a tenth of the diameter") {
    const std::string text = R"({
      "scenario": { "links": 2 },
      "pe": { "subset": "all" },
      "dither": { "amplitude": "default" }
    })";
    const BuiltScenario b = build_scenario(parse_scenario(text, "d"));
    CHECK(b.sim.dither->amplitude == doctest::Approx(0.1 * std::sqrt(2.0)));
    CHECK_FALSE(b.sim.pe->excited_only);
  }

  TEST_CASE("csv header and byte-identical artifacts") {
    const ScenarioFile f = parse_scenario(kBase, "base");
    const BuiltScenario b = build_scenario(f);
    const RunResult r1 = run(b.game, b.sim);
    std::ostringstream csv;
    write_trajectory_csv(r1.log, csv);
    const std::string text = csv.str();
    CHECK(text.substr(0, text.find('\n')) ==
          "t,r_1,r_2,a_1,a_2,e_obs_norm,lambda_e,J,J_hat,H,stationarity_residual,theta_err,gramian_mineig");

    const auto root = std::filesystem::temp_directory_path() / "asg_test_artifacts";
    std::filesystem::remove_all(root);
    for (const char* d : {"a", "b"}) {
      const RunResult r = run(b.game, b.sim);
      write_run_artifacts(f, b, r, summarize(f.name, b, r), root / d);
    }
    auto slurp = [](const std::filesystem::path& p) {
      std::ifstream in(p, std::ios::binary);
      return std::string(std::istreambuf_iterator<char>(in), {});
    };
    CHECK(slurp(root / "a" / "trajectory.csv") == slurp(root / "b" / "trajectory.csv"));
    CHECK(slurp(root / "a" / "trajectory.csv") == text);
    CHECK(std::filesystem::exists(root / "a" / "summary.json"));
    CHECK_FALSE(std::filesystem::exists(root / "a" / "plots"));
    std::filesystem::remove_all(root);
  }

  TEST_CASE("number formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(std::nan("")) == "");
    CHECK(format_double(-2.0) == "-2");
  }
}
