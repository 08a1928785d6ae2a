#include "asg/report.hpp"

#include "asg/errors.hpp"
#include "asg/optimizer.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>

namespace asg {

namespace {

using nlohmann::ordered_json;

void put(std::string& buf, double x) {
  if (std::isnan(x)) return;
  char tmp[32];
  auto res = std::to_chars(tmp, tmp + sizeof tmp, x);
  buf.append(tmp, res.ptr);
}

ordered_json vec_json(const Vec& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

ordered_json num_or_null(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write " + p.string());
  return out;
}

// Plot series keep at most ~20000 rows, always including the last record.
std::size_t plot_stride(const TrajectoryLog& log) { return std::max<std::size_t>(1, log.size() / 20000); }

template <class RowFn>
void write_series(const std::filesystem::path& p, const std::string& header, const TrajectoryLog& log,
                  RowFn&& row) {
  std::string buf = header + "\n";
  const std::size_t stride = plot_stride(log);
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (i % stride != 0 && i + 1 != log.size()) continue;
    put(buf, log.t[i]);
    row(buf, i);
    buf += '\n';
  }
  auto out = open_out(p);
  out << buf;
}

std::string indexed_header(const char* prefix, int n) {
  std::string h;
  for (int l = 1; l <= n; ++l) h += std::string(",") + prefix + std::to_string(l);
  return h;
}

}  // namespace

std::string format_double(double x) {
  std::string s;
  put(s, x);
  return s;
}

void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out) {
  std::string buf = "t" + indexed_header("r_", log.n_r) + indexed_header("a_", log.n_a) +
                    ",e_obs_norm,lambda_e,J,J_hat,H,stationarity_residual,theta_err,gramian_mineig\n";
  buf.reserve(buf.size() + log.size() * 24 * static_cast<std::size_t>(8 + log.n_r + log.n_a));
  for (std::size_t i = 0; i < log.size(); ++i) {
    put(buf, log.t[i]);
    for (int l = 0; l < log.n_r; ++l) {
      buf += ',';
      put(buf, log.r[i * static_cast<std::size_t>(log.n_r) + static_cast<std::size_t>(l)]);
    }
    for (int l = 0; l < log.n_a; ++l) {
      buf += ',';
      put(buf, log.a[i * static_cast<std::size_t>(log.n_a) + static_cast<std::size_t>(l)]);
    }
    for (double x : {log.e_norm[i], log.lambda_e[i], log.j[i], log.j_hat[i], log.h[i], log.stationarity[i],
                     log.theta_err[i], log.gramian_mineig[i]}) {
      buf += ',';
      put(buf, x);
    }
    buf += '\n';
  }
  out << buf;
}

RunSummary summarize(const std::string& name, const BuiltScenario& built, const RunResult& result) {
  const TrajectoryLog& log = result.log;
  if (log.size() == 0) throw InputError("summarize: empty log");
  const std::size_t last = log.size() - 1;
  RunSummary s;
  s.name = name;
  s.seed = built.sim.seed;
  s.horizon = built.sim.horizon;
  s.step = built.sim.step;
  s.records = log.size();
  s.settling = settling_time(log);
  s.r_final = log.r_final;
  s.r_played_final = log.r_at(last);
  s.a_final = log.a_at(last);
  s.j_final = log.j[last];
  s.j_hat_final = log.j_hat[last];
  s.h_final = log.h[last];
  s.e_norm_final = log.e_norm[last];
  s.lambda_final = log.lambda_e[last];
  s.stationarity_final = stationarity_residual(built.game, log.r_final, log.theta_final);
  s.stationarity_nonsmooth =
      nonsmooth_stationarity_residual(built.game, log.r_final, log.theta_final, kStationarityRadius);
  if (log.true_theta_final) s.theta_err_final = (log.theta_final - *log.true_theta_final).norm();
  s.diagnostics = result.diagnostics;
  if (built.sim.pe) {
    const PEConfig& pe = *built.sim.pe;
    const double eps = built.sim.estimator.eps_obs;
    s.pe_report = parameter_bound_check(log, built.game, pe, eps, eps * std::sqrt(pe.tau0 / pe.alpha0));
  }
  s.dither_episodes = log.dither_episodes.size();
  s.switch_events = log.switch_events.size();
  return s;
}

std::string summary_json(const RunSummary& s) {
  ordered_json j;
  j["scenario"] = s.name;
  j["seed"] = s.seed;
  j["horizon"] = s.horizon;
  j["step"] = s.step;
  j["records"] = s.records;
  j["settling_time"] = s.settling ? ordered_json(*s.settling) : ordered_json(nullptr);
  j["settling_note"] = s.settling ? "no estimator reactivation within the horizon; not certified beyond it"
                                  : "estimator active at the horizon";
  j["final"] = {{"r", vec_json(s.r_final)},
                {"r_played", vec_json(s.r_played_final)},
                {"a", vec_json(s.a_final)},
                {"J", s.j_final},
                {"J_hat", s.j_hat_final},
                {"H", num_or_null(s.h_final)},
                {"e_obs_norm", s.e_norm_final},
                {"lambda_e", s.lambda_final},
                {"stationarity_residual", s.stationarity_final},
                {"stationarity_residual_nonsmooth", s.stationarity_nonsmooth},
                {"theta_err", s.theta_err_final ? ordered_json(*s.theta_err_final) : ordered_json(nullptr)}};
  const RunDiagnostics& d = s.diagnostics;
  j["invariants"] = {
      {"lyapunov", {{"ok", d.lyapunov_violations == 0},
                    {"steps", d.lyapunov_steps},
                    {"violations", d.lyapunov_violations},
                    {"worst_margin", d.lyapunov_worst_margin}}},
      {"lyapunov_decrease", {{"ok", d.decrease_violations == 0},
                             {"steps", d.decrease_steps},
                             {"skipped_mismatch", d.decrease_skipped},
                             {"violations", d.decrease_violations},
                             {"worst_margin", d.decrease_worst_margin}}},
      {"dwell_time", {{"ok", d.dwell_ok},
                      {"activations", d.activations},
                      {"min_gap", num_or_null(d.min_activation_gap)},
                      {"bound", d.dwell_bound},
                      {"max_error_rate", d.max_error_rate}}},
      {"boundedness", {{"ok", d.all_finite},
                       {"max_abs_r", d.max_abs_r},
                       {"max_abs_theta", d.max_abs_theta},
                       {"max_e_obs_norm", d.max_e_norm}}}};
  if (s.pe_report) {
    const ParameterBoundReport& p = *s.pe_report;
    j["pe"] = {{"applicable", p.applicable},
               {"reason", p.reason},
               {"settling_time", p.settling},
               {"window_min_eig", p.min_eig},
               {"excitation_ok", p.excitation_ok},
               {"window_error_ok", p.window_error_ok},
               {"coords", p.coords},
               {"eps_theta", p.eps_theta},
               {"theta_err_on_coords", p.error},
               {"max_abs_err_on_coords", p.max_abs_error},
               {"bound_holds", p.holds}};
  } else {
    j["pe"] = nullptr;
  }
  j["dither_episodes"] = s.dither_episodes;
  j["switch_events"] = s.switch_events;
  j["wall_seconds"] = s.wall_seconds;
  return j.dump(2) + "\n";
}

std::filesystem::path write_run_artifacts(const ScenarioFile& file, const BuiltScenario& built,
                                          const RunResult& result, const RunSummary& summary,
                                          const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const TrajectoryLog& log = result.log;
  if (file.write_csv) {
    auto out = open_out(dir / "trajectory.csv");
    write_trajectory_csv(log, out);
  }
  if (file.write_summary) {
    auto out = open_out(dir / "summary.json");
    out << summary_json(summary);
  }
  if (!file.write_plots) return dir;

  const fs::path plots = dir / "plots";
  fs::create_directories(plots);
  const int nr = log.n_r;
  const int na = log.n_a;
  write_series(plots / "obs_error.csv", "t,e_obs_norm,lambda_e", log, [&](std::string& b, std::size_t i) {
    b += ',';
    put(b, log.e_norm[i]);
    b += ',';
    put(b, log.lambda_e[i]);
  });
  write_series(plots / "router_action.csv", "t" + indexed_header("r_", nr), log,
               [&](std::string& b, std::size_t i) {
                 for (int l = 0; l < nr; ++l) {
                   b += ',';
                   put(b, log.r[i * static_cast<std::size_t>(nr) + static_cast<std::size_t>(l)]);
                 }
               });
  write_series(plots / "attacker_action.csv", "t" + indexed_header("a_", na), log,
               [&](std::string& b, std::size_t i) {
                 for (int l = 0; l < na; ++l) {
                   b += ',';
                   put(b, log.a[i * static_cast<std::size_t>(na) + static_cast<std::size_t>(l)]);
                 }
               });
  write_series(plots / "router_costs.csv", "t,J,J_hat", log, [&](std::string& b, std::size_t i) {
    b += ',';
    put(b, log.j[i]);
    b += ',';
    put(b, log.j_hat[i]);
  });
  write_series(plots / "attacker_cost.csv", "t,H", log, [&](std::string& b, std::size_t i) {
    b += ',';
    put(b, log.h[i]);
  });
  write_series(plots / "parameter_error.csv", "t,theta_err", log, [&](std::string& b, std::size_t i) {
    b += ',';
    put(b, log.theta_err[i]);
  });

  // Final estimate against the ground truth of the last phase.
  {
    const auto& model = *built.model;
    std::string b = "index,link,cell,theta_hat,theta_true\n";
    for (int l = 0; l < model.links(); ++l) {
      for (int c = 0; c < model.cell_count(); ++c) {
        const int idx = model.theta_index(l, c);
        b += std::to_string(idx) + "," + std::to_string(l + 1) + "," + std::to_string(c + 1) + ",";
        put(b, log.theta_final[idx]);
        b += ',';
        if (log.true_theta_final) put(b, (*log.true_theta_final)[idx]);
        b += '\n';
      }
    }
    auto out = open_out(plots / "theta_final.csv");
    out << b;
  }

  // Actual and predicted cost over the leader set (two links only).
  if (nr == 2) {
    const ddos::DdosScenario& sc = built.phases.back();
    std::string b = "r_1,J,J_hat\n";
    const int n = 400;
    for (int k = 0; k <= n; ++k) {
      const double r1 = std::min(sc.c0, sc.r_total) * k / n;
      Vec r(2);
      r << r1, sc.r_total - r1;
      if (r[1] < 0.0 || r[1] > sc.c0) continue;
      put(b, r1);
      b += ',';
      put(b, ddos::router_cost(r, ddos::attacker_best_response(r, sc), sc));
      b += ',';
      put(b, predicted_cost(built.game, r, log.theta_final));
      b += '\n';
    }
    auto out = open_out(plots / "cost_function.csv");
    out << b;
  }
  return dir;
}

}  // namespace asg
