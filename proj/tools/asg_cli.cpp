// asg: run, sweep, verify and oracle reports for the adaptive Stackelberg
// learning scenarios.

#include "asg/errors.hpp"
#include "asg/oracles.hpp"
#include "asg/report.hpp"
#include "asg/scenario_config.hpp"
#include "asg/verify.hpp"

#include <CLI11.hpp>

#include <glob.h>

#include <chrono>
#include <cstdlib>
#include <future>
#include <iostream>
#include <mutex>
#include <sstream>

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFailed = 1, kInvalid = 2, kRuntime = 3 };

fs::path output_root() {
  const char* env = std::getenv("ASG_OUTPUT_ROOT");
  return env && *env ? fs::path(env) : fs::path("out");
}

struct RunOutcome {
  int status = kOk;
  std::string message;
};

RunOutcome run_one(const std::string& path, std::optional<std::uint64_t> seed, const std::string& out_override) {
  RunOutcome res;
  std::ostringstream msg;
  try {
    asg::ScenarioFile file = asg::load_scenario_file(path);
    if (seed) file.sim.seed = *seed;
    const asg::BuiltScenario built = asg::build_scenario(file);
    const auto t0 = std::chrono::steady_clock::now();
    const asg::RunResult result = asg::run(built.game, built.sim);
    asg::RunSummary summary = asg::summarize(file.name, built, result);
    summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const fs::path dir = out_override.empty() ? output_root() / file.output_directory : fs::path(out_override);
    asg::write_run_artifacts(file, built, result, summary, dir);
    msg << file.name << ": " << result.log.size() << " records in " << summary.wall_seconds << " s -> " << dir.string()
        << "\n  final r = (" << summary.r_final.transpose() << "), J = " << summary.j_final
        << ", |e_obs| = " << summary.e_norm_final << ", settling = "
        << (summary.settling ? std::to_string(*summary.settling) : std::string("none")) << "\n";
  } catch (const asg::InputError& e) {
    res.status = kInvalid;
    msg << "error: " << e.what() << "\n";
  } catch (const asg::SimulationError& e) {
    res.status = kRuntime;
    msg << "runtime error: " << e.what() << " (last good record " << e.last_good_record() << ")\n";
  } catch (const std::exception& e) {
    res.status = kRuntime;
    msg << "error: " << e.what() << "\n";
  }
  res.message = msg.str();
  return res;
}

std::vector<std::string> expand_glob(const std::string& pattern) {
  glob_t g{};
  std::vector<std::string> out;
  if (::glob(pattern.c_str(), 0, nullptr, &g) == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  }
  globfree(&g);
  return out;
}

int print_properties(const std::vector<asg::PropertyResult>& props) {
  int failed = 0;
  for (const auto& p : props) {
    std::cout << asg::format_property(p) << "\n";
    if (!p.pass) ++failed;
  }
  std::cout << (props.size() - static_cast<std::size_t>(failed)) << "/" << props.size() << " properties pass\n";
  return failed == 0 ? kOk : kFailed;
}

int cmd_verify(const std::string& target, std::uint64_t seed, bool inject_sign_error) {
  std::vector<asg::PropertyResult> props;
  try {
    if (target == "all" || target == "properties") {
      props = asg::verify_properties(seed);
      props.push_back(asg::verify_mutation_detected(seed));
    }
    if (target != "properties" && target != "all") {
      asg::ScenarioFile file = asg::load_scenario_file(target);
      asg::BuiltScenario built = asg::build_scenario(file);
      if (inject_sign_error) built.sim.estimator_override = asg::sign_flipped_increment();
      const asg::RunResult result = asg::run(built.game, built.sim);
      const asg::RunSummary summary = asg::summarize(file.name, built, result);
      auto run_props = asg::verify_run(file.name, result, summary);
      props.insert(props.end(), run_props.begin(), run_props.end());
      const auto& sc = built.phases.front();
      if (sc.links <= 3 && sc.weights.isOnes()) {
        const auto s = asg::ddos::grid_stackelberg(sc, {200}, 0.0);
        const asg::Vec target_r = asg::Vec::Constant(sc.links, sc.r_total / sc.links);
        std::ostringstream d;
        d << "r* = (" << s.r_star.transpose() << "), J* = " << s.j_star;
        props.push_back({file.name + ".grid_stackelberg", (s.r_star - target_r).cwiseAbs().maxCoeff() <= 1e-12,
                         (s.r_star - target_r).cwiseAbs().maxCoeff(), 1e-12, d.str()});
      }
    }
  } catch (const asg::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return print_properties(props);
}

int cmd_oracle(const std::string& path, int resolution, double epsilon) {
  try {
    const asg::ScenarioFile file = asg::load_scenario_file(path);
    const asg::BuiltScenario built = asg::build_scenario(file);
    for (std::size_t i = 0; i < built.phases.size(); ++i) {
      const auto& sc = built.phases[i];
      const auto s = asg::ddos::grid_stackelberg(sc, {resolution}, epsilon);
      std::cout << file.name << " phase " << i << " weights (" << sc.weights.transpose() << ")\n"
                << "  resolution " << resolution << ", " << s.grid_points << " grid points\n"
                << "  r* = (" << s.r_star.transpose() << ")\n"
                << "  J* = " << s.j_star << " (refined grid " << s.j_refined << ")\n"
                << "  epsilon action: " << (s.is_epsilon_action ? "yes" : "no") << " (epsilon " << epsilon
                << ", slack " << s.slack << ")\n";
    }
  } catch (const asg::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const asg::UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kInvalid;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive learning in Stackelberg games with an unknown follower"};
  app.require_subcommand(1);

  std::string cfg_path, out_dir, pattern, verify_target = "all";
  std::uint64_t seed = 0;
  int jobs = 0, resolution = 200;
  double epsilon = 0.01;
  bool inject = false;

  auto* run_cmd = app.add_subcommand("run", "run one scenario file");
  run_cmd->add_option("config", cfg_path, "scenario file")->required();
  auto* run_seed = run_cmd->add_option("--seed", seed, "override sim.seed");
  run_cmd->add_option("--out", out_dir, "output directory (default: $ASG_OUTPUT_ROOT/<output.directory>)");

  auto* sweep_cmd = app.add_subcommand("sweep", "run every scenario matching a glob, concurrently");
  sweep_cmd->add_option("pattern", pattern, "glob, e.g. 'configs/*.cfg'")->required();
  auto* sweep_seed = sweep_cmd->add_option("--seed", seed, "override sim.seed for every file");
  sweep_cmd->add_option("--jobs", jobs, "concurrent runs (default: hardware threads)");

  auto* verify_cmd = app.add_subcommand("verify", "run the invariant suite");
  verify_cmd->add_option("target", verify_target, "'all', 'properties' or a scenario file");
  verify_cmd->add_option("--seed", seed, "sampling seed");
  verify_cmd->add_flag("--inject-sign-error", inject, "flip the estimator vector field (mutation fixture)");

  auto* oracle_cmd = app.add_subcommand("oracle", "grid Stackelberg report for a scenario file");
  oracle_cmd->add_option("config", cfg_path, "scenario file")->required();
  oracle_cmd->add_option("--resolution", resolution, "grid points per axis")->check(CLI::Range(2, 100000));
  oracle_cmd->add_option("--epsilon", epsilon, "epsilon for the certification")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  if (*run_cmd) {
    std::optional<std::uint64_t> s;
    if (*run_seed) s = seed;
    const RunOutcome r = run_one(cfg_path, s, out_dir);
    (r.status == kOk ? std::cout : std::cerr) << r.message;
    return r.status;
  }
  if (*sweep_cmd) {
    const auto files = expand_glob(pattern);
    if (files.empty()) {
      std::cerr << "error: no files match " << pattern << "\n";
      return kInvalid;
    }
    std::optional<std::uint64_t> s;
    if (*sweep_seed) s = seed;
    const std::size_t width =
        jobs > 0 ? static_cast<std::size_t>(jobs) : std::max(1u, std::thread::hardware_concurrency());
    std::vector<RunOutcome> outcomes(files.size());
    std::mutex io;
    for (std::size_t start = 0; start < files.size(); start += width) {
      std::vector<std::future<void>> batch;
      for (std::size_t i = start; i < std::min(files.size(), start + width); ++i) {
        batch.push_back(std::async(std::launch::async, [&, i] {
          outcomes[i] = run_one(files[i], s, "");
          std::lock_guard<std::mutex> lock(io);
          (outcomes[i].status == kOk ? std::cout : std::cerr) << outcomes[i].message << std::flush;
        }));
      }
      for (auto& f : batch) f.get();
    }
    int status = kOk;
    for (const auto& o : outcomes) status = std::max(status, o.status);
    return status;
  }
  if (*verify_cmd) return cmd_verify(verify_target, seed, inject);
  if (*oracle_cmd) return cmd_oracle(cfg_path, resolution, epsilon);
  return kOk;
}
