#pragma once

#include "asg/scenario_config.hpp"
#include "asg/simulation.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace asg {

/// Probe radius for the nonsmooth stationarity residual reported at the horizon.
inline constexpr double kStationarityRadius = 1e-3;

/// Shortest round-trip decimal form; empty for NaN.
std::string format_double(double x);

/// Header: t, r_1..r_L, a_1..a_L, e_obs_norm, lambda_e, J, J_hat, H,
/// stationarity_residual, theta_err, gramian_mineig.
void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out);

struct RunSummary {
  std::string name;
  std::uint64_t seed = 0;
  double horizon = 0.0;
  double step = 0.0;
  std::size_t records = 0;
  std::optional<double> settling;
  Vec r_final;         ///< nominal leader action after the last step
  Vec r_played_final;  ///< action in the last record
  Vec a_final;
  double j_final = 0.0;
  double j_hat_final = 0.0;
  double h_final = 0.0;
  double e_norm_final = 0.0;
  double lambda_final = 0.0;
  double stationarity_final = 0.0;
  double stationarity_nonsmooth = 0.0;
  std::optional<double> theta_err_final;
  RunDiagnostics diagnostics;
  std::optional<ParameterBoundReport> pe_report;
  std::size_t dither_episodes = 0;
  std::size_t switch_events = 0;
  double wall_seconds = 0.0;
};

RunSummary summarize(const std::string& name, const BuiltScenario& built, const RunResult& result);

std::string summary_json(const RunSummary& s);

/// Writes trajectory.csv, summary.json and plots/*.csv under `dir` as the
/// file's output formats request. Returns the directory.
std::filesystem::path write_run_artifacts(const ScenarioFile& file, const BuiltScenario& built,
                                          const RunResult& result, const RunSummary& summary,
                                          const std::filesystem::path& dir);

}  // namespace asg
