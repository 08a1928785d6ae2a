// Acceptance report: one PASS/FAIL line per criterion, measured values next
// to the thresholds. Exit status is 0 when every run completed; --strict
// makes any FAIL line fatal as well.

#include "asg/ddos.hpp"
#include "asg/report.hpp"
#include "asg/scenario_config.hpp"
#include "asg/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace asg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  BuiltScenario built;
  RunResult result;
  RunSummary summary;
  double seconds = 0.0;
};

Outcome run_config(const fs::path& path) {
  const ScenarioFile file = load_scenario_file(path.string());
  Outcome o{build_scenario(file), {}, {}, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  o.result = run(o.built.game, o.built.sim);
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.summary = summarize(file.name, o.built, o.result);
  return o;
}

struct Line {
  bool pass = true;
  std::ostringstream text;

  // Appends "name=value (op bound)" and folds the verdict in.
  void check(const std::string& name, double value, bool ok, const std::string& bound) {
    if (text.tellp() > 0) text << "; ";
    text << name << "=" << value << " (" << bound << (ok ? "" : ", missed") << ")";
    pass = pass && ok;
  }
  void note(const std::string& s) {
    if (text.tellp() > 0) text << "; ";
    text << s;
  }
};

double inf_dist(const Vec& a, const Vec& b) { return (a - b).cwiseAbs().maxCoeff(); }

Vec last_r(const Outcome& o) { return o.result.log.r_at(o.result.log.size() - 1); }

Line criterion1(const Outcome& o) {
  Line l;
  const auto& s = o.summary;
  l.check("|e_obs|", s.e_norm_final, s.e_norm_final < 0.002, "< 0.002");
  l.check("settling", s.settling.value_or(-1.0), s.settling.has_value() && s.lambda_final == 0.0,
          "lambda_e = 0 on a terminal segment");
  l.check("|r - (0.5,0.5)|inf", inf_dist(last_r(o), Vec::Constant(2, 0.5)), inf_dist(last_r(o), Vec::Constant(2, 0.5)) <= 0.02,
          "<= 0.02");
  l.check("|J + 0.5|", std::abs(s.j_final + 0.5), std::abs(s.j_final + 0.5) <= 0.02, "<= 0.02");
  l.check("runtime_s", o.seconds, o.seconds <= 60.0, "<= 60");
  return l;
}

Line criterion2(const Outcome& o) {
  Line l;
  const auto& s = o.summary;
  const double r1 = last_r(o)[0];
  l.check("r_1", r1, r1 >= 0.24 && r1 <= 0.30, "in [0.24, 0.30]");
  l.check("J", s.j_final, s.j_final >= -0.76 && s.j_final <= -0.70, "in [-0.76, -0.70]");
  l.check("H_bar", s.h_final, s.h_final >= 0.22 && s.h_final <= 0.28, "in [0.22, 0.28]");
  l.note("switch events " + std::to_string(s.switch_events));
  return l;
}

Line criterion3(const Outcome& o) {
  Line l;
  if (!o.summary.pe_report) {
    l.pass = false;
    l.note("no PE report");
    return l;
  }
  const ParameterBoundReport& p = *o.summary.pe_report;
  if (!p.applicable) {
    l.pass = false;
    l.note("bound not applicable: " + p.reason);
    return l;
  }
  l.check("window_min_eig", p.min_eig, p.excitation_ok, ">= alpha0 = 1");
  l.check("window_error_ok", p.window_error_ok ? 1.0 : 0.0, p.window_error_ok, "|e_obs| < eps_obs on [T, T+tau0]");
  l.check("|theta_hat(T) - theta|", p.error, p.error < p.eps_theta,
          "< eps_obs sqrt(tau0/alpha0) = " + std::to_string(p.eps_theta));
  l.check("max_abs_err", p.max_abs_error, p.max_abs_error <= 0.05, "<= 0.05");
  l.note(std::to_string(p.coords.size()) + " excited coordinates, " + std::to_string(o.summary.dither_episodes) +
         " dither episodes");
  return l;
}

Line criterion4(const Outcome& o) {
  Line l;
  const auto& s = o.summary;
  const Vec target = Vec::Constant(3, 0.5);
  l.check("|e_obs|", s.e_norm_final, s.e_norm_final < 0.002, "< 0.002");
  l.check("|r - (0.5,0.5,0.5)|inf", inf_dist(last_r(o), target), inf_dist(last_r(o), target) <= 0.05, "<= 0.05");
  l.check("|J + 0.5|", std::abs(s.j_final + 0.5), std::abs(s.j_final + 0.5) <= 0.05, "<= 0.05");
  l.check("runtime_s", o.seconds, o.seconds <= 600.0, "<= 600");

  // Router actions (0.45 + d, 0.5 - d, 0.55) share one cell while the attacker
  // switches at d = 0.025.
  const auto& sc = o.built.phases.front();
  SampleGrid grid;
  for (int i = 1; i < 100; ++i) {
    const double d = 0.05 * i / 100.0;
    grid.r_points.push_back((Vec(3) << 0.45 + d, 0.5 - d, 0.55).finished());
  }
  grid.theta_points.push_back(ddos::ground_truth_theta(sc, *o.built.model));
  grid.description = "(0.45 + d, 0.5 - d, 0.55), d in (0, 0.05)";
  const MismatchReport m = mismatch_error_bound_check(o.built.game, grid, grid.theta_points.front(), 0.999);
  l.check("mismatch_attained", m.attained, !m.holds, "bound check fails for eps_f < 1");
  return l;
}

Line criterion5(const Outcome& o) {
  Line l;
  const auto& s = o.summary;
  const Vec target = (Vec(3) << 0.45, 0.6, 0.45).finished();
  l.check("|r - (0.45,0.6,0.45)|inf", inf_dist(last_r(o), target), inf_dist(last_r(o), target) <= 0.05, "<= 0.05");
  l.check("J", s.j_final, s.j_final >= -0.65 && s.j_final <= -0.55, "in [-0.65, -0.55]");
  l.check("H_bar", s.h_final, s.h_final >= 0.40 && s.h_final <= 0.50, "in [0.40, 0.50]");
  return l;
}

Line criterion6(const std::map<std::string, Outcome>& runs, std::uint64_t seed) {
  Line l;
  int failed = 0, total = 0;
  std::ostringstream failures;
  auto take = [&](const PropertyResult& p) {
    ++total;
    if (!p.pass) {
      ++failed;
      failures << " [" << format_property(p) << "]";
    }
  };
  for (const PropertyResult& p : verify_properties(seed)) take(p);
  take(verify_mutation_detected(seed));
  for (const auto& [name, o] : runs) {
    for (const PropertyResult& p : verify_run(name, o.result, o.summary)) {
      if (p.name == name + ".stationarity") continue;  // checked below for every listed run
      take(p);
    }
  }
  for (const char* name : {"l2_matched", "l2_switch", "l3_mismatch", "l3_switch"}) {
    const auto it = runs.find(name);
    if (it == runs.end()) continue;
    const double res = it->second.summary.stationarity_nonsmooth;
    take({std::string(name) + ".stationarity", res < 1e-3, res, 1e-3, "nonsmooth residual at horizon"});
  }
  l.pass = failed == 0;
  l.note(std::to_string(total - failed) + "/" + std::to_string(total) + " properties pass");
  if (failed) l.note("failures:" + failures.str());
  return l;
}

Line criterion7(std::uint64_t seed) {
  Line l;
  const auto sc = ddos::DdosScenario::standard(2);
  const auto model = ddos::build_rbf_model(2, 4, sc.c0, sc.r_total);
  GameDefinition game = ddos::make_game(sc, model);
  const Vec theta = ddos::ground_truth_theta(sc, *model);
  const MismatchFollower mf = bounded_mismatch_follower(sc, *model, theta, 1.5e-4);
  game.follower = mf.follower;

  SimConfig cfg;
  cfg.horizon = 1e4;
  cfg.step = 0.05;
  cfg.seed = seed;
  cfg.pe = PEConfig{};
  DitherSpec d;
  d.amplitude = 0.1 * game.leader_set.diameter();
  cfg.dither = d;
  const double eps_obs = cfg.estimator.eps_obs;
  const double eps_obs_prime = cfg.estimator.eps_obs_prime;
  l.check("eps_f", mf.eps_f, eps_obs > eps_obs_prime && eps_obs_prime > mf.eps_f, "< eps_obs' = 0.001 < eps_obs");

  const RunResult r = run(game, cfg);
  const double e_final = r.log.e_norm.back();
  l.check("settling", r.log.settling.value_or(-1.0), r.log.settling.has_value(), "settles within the horizon");
  l.check("|e_obs|", e_final, e_final < eps_obs, "< eps_obs");
  l.check("decrease_violations", static_cast<double>(r.diagnostics.decrease_violations),
          r.diagnostics.decrease_violations == 0, "== 0");

  // eps_theta sqrt(alpha0 / tau0) - eps_f >= eps_obs
  const PEConfig& pe = *cfg.pe;
  const double eps_theta = 0.025;
  const bool thresholds_ok = eps_theta * std::sqrt(pe.alpha0 / pe.tau0) - mf.eps_f >= eps_obs;
  const ParameterBoundReport p = parameter_bound_check(r.log, game, pe, eps_obs, eps_theta);
  l.check("eps_theta", eps_theta, thresholds_ok, "eps_theta sqrt(alpha0/tau0) - eps_f >= eps_obs");
  if (!p.applicable) {
    l.pass = false;
    l.note("parameter bound not applicable: " + p.reason);
  } else {
    l.check("window_min_eig", p.min_eig, p.excitation_ok, ">= alpha0");
    l.check("|theta_hat(T) - theta|", p.error, p.holds, "< eps_theta on the excited coordinates");
  }
  return l;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance report"};
  std::string configs = "configs", report;
  std::uint64_t seed = 1;
  bool strict = false;
  app.add_option("--configs", configs, "directory with the bundled scenario files");
  app.add_option("--report", report, "also write the report to this file");
  app.add_option("--seed", seed, "seed for the property suite and the synthetic run");
  app.add_flag("--strict", strict, "exit nonzero when any criterion fails");
  CLI11_PARSE(app, argc, argv);

  std::map<std::string, Outcome> runs;
  try {
    for (const char* name : {"l2_matched", "l2_switch", "l2_matched_pe", "l3_mismatch", "l3_switch"}) {
      runs.emplace(name, run_config(fs::path(configs) / (std::string(name) + ".cfg")));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::vector<std::pair<std::string, Line>> lines;
  lines.emplace_back("1 L=2 matched", criterion1(runs.at("l2_matched")));
  lines.emplace_back("2 L=2 switch", criterion2(runs.at("l2_switch")));
  lines.emplace_back("3 L=2 PE", criterion3(runs.at("l2_matched_pe")));
  lines.emplace_back("4 L=3 mismatch", criterion4(runs.at("l3_mismatch")));
  lines.emplace_back("5 L=3 switch", criterion5(runs.at("l3_switch")));
  lines.emplace_back("6 property suite", criterion6(runs, seed));
  lines.emplace_back("7 bounded mismatch", criterion7(seed));

  std::ostringstream out;
  int passed = 0;
  for (const auto& [name, line] : lines) {
    out << (line.pass ? "PASS" : "FAIL") << "  criterion " << name << ": " << line.text.str() << "\n";
    passed += line.pass ? 1 : 0;
  }
  out << passed << "/" << lines.size() << " criteria pass\n";
  std::cout << out.str();
  if (!report.empty()) std::ofstream(report) << out.str();
  return strict && passed != static_cast<int>(lines.size()) ? 1 : 0;
}
