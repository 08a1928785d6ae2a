#pragma once

#include "asg/estimator.hpp"
#include "asg/optimizer.hpp"
#include "asg/random.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace asg {

enum class GramianMode {
  full,        ///< integrand K^T K
  simplified,  ///< integrand jac_theta^T jac_theta
};

struct PEConfig {
  double tau0 = 100.0;
  double alpha0 = 1.0;
  GramianMode mode = GramianMode::full;
  /// Explicit coordinate subset. When empty and `excited_only` is set, the
  /// subset is every coordinate the window actually excites.
  std::vector<int> subset;
  bool excited_only = true;

  void validate() const;
};

enum class DitherTrigger { on_lambda_zero, scheduled };

/// Played action is Proj_R(r + delta), delta uniform in the amplitude ball,
/// for `duration` time units after each trigger.
struct DitherSpec {
  double amplitude = 0.0;
  double duration = 50.0;
  DitherTrigger trigger = DitherTrigger::on_lambda_zero;
  std::vector<double> times;  ///< scheduled trigger only
  /// With a PE config, an episode is followed by another while the trailing
  /// Gramian stays below alpha0, at most this many in a row.
  int max_repeats = 20;

  void validate() const;
};

/// Replacement for -h lambda K^T e, used by mutation fixtures.
using EstimatorIncrementFn =
    std::function<Vec(const Vec& theta_hat, const Vec& e_obs, const GainMatrix& k, double h, double lambda_e)>;

struct SimConfig {
  double horizon = 1e4;
  double step = 0.05;
  std::uint64_t seed = 1;
  EstimatorParams estimator;
  double lambda_r = 0.002;
  std::optional<Vec> initial_r;      ///< random in R when absent
  std::optional<Vec> initial_theta;  ///< random in Theta when absent
  StrategySwitchSchedule switches;
  std::optional<PEConfig> pe;
  std::optional<DitherSpec> dither;
  int record_stride = 1;
  EstimatorIncrementFn estimator_override;

  void validate() const;
  long step_count() const;
  OptimizerConfig optimizer() const { return {lambda_r, step}; }
};

/// Columnar per-record series. Row-major blocks of width L for r, a, a_hat.
struct TrajectoryLog {
  int n_r = 0;
  int n_a = 0;
  double step = 0.0;
  int record_stride = 1;

  std::vector<double> t;
  std::vector<double> r;
  std::vector<double> a;
  std::vector<double> a_hat;
  std::vector<double> e_norm;
  std::vector<double> lambda_e;
  std::vector<double> j;
  std::vector<double> j_hat;
  std::vector<double> h;
  std::vector<double> stationarity;
  std::vector<double> theta_err;       ///< NaN without ground truth
  std::vector<double> gramian_mineig;  ///< NaN without PE monitoring
  std::vector<double> theta_step;      ///< ||theta_hat+ - theta_hat|| after the record

  struct SwitchEvent {
    double time;
    std::string label;
  };
  std::vector<SwitchEvent> switch_events;
  std::vector<std::pair<double, double>> dither_episodes;  ///< (start, end)

  /// Earliest step time after which lambda_e stays 0 through the horizon.
  std::optional<double> settling;
  Vec theta_initial;
  Vec theta_final;
  Vec r_final;            ///< nominal leader action after the last record
  std::optional<Vec> true_theta_final;
  bool matched_final = false;

  std::size_t size() const { return t.size(); }
  Vec r_at(std::size_t i) const;
  Vec a_at(std::size_t i) const;
  Vec a_hat_at(std::size_t i) const;
};

/// Per-step invariant bookkeeping gathered while the run executes.
struct RunDiagnostics {
  // Exact discrete Lyapunov inequality
  //   dV <= -2 h lambda (e - e_f)^T e + h^2 lambda^2 ||K^T e||^2
  // with V = ||theta_hat - theta||^2 and e_f the mismatch part of e.
  long lyapunov_steps = 0;
  long lyapunov_violations = 0;
  double lyapunov_worst_margin = 0.0;  ///< min(bound - dV); negative on violation
  // Decrease dV <= h^2 lambda^2 ||K^T e||^2 wherever ||e_f|| <= ||e||.
  long decrease_steps = 0;
  long decrease_skipped = 0;
  long decrease_violations = 0;
  double decrease_worst_margin = 0.0;
  // Dwell time between consecutive activations.
  double max_error_rate = 0.0;  ///< M_hat = max ||e_{k+1} - e_k|| / h
  long activations = 0;
  double min_activation_gap = 0.0;  ///< +inf with fewer than two activations
  double dwell_bound = 0.0;         ///< (eps_obs - eps_obs') / M_hat
  bool dwell_ok = true;
  // Boundedness of the logged series.
  double max_abs_r = 0.0;
  double max_abs_theta = 0.0;
  double max_e_norm = 0.0;
  bool all_finite = true;
};

struct RunResult {
  TrajectoryLog log;
  RunDiagnostics diagnostics;
};

/// Coupled estimator / leader simulation. Per step: apply due switches,
/// choose the played action (dithered or nominal), observe the follower,
/// switch, log, then update theta_hat and r with the values at t_k.
RunResult run(const GameDefinition& game, const SimConfig& cfg);

std::optional<double> settling_time(const TrajectoryLog& log);

struct GramianReport {
  std::vector<int> coords;  ///< coordinates the matrix is restricted to
  Mat gramian;
  double min_eig = 0.0;
};

/// Trapezoidal window Gramian over [t, t + tau0] reconstructed from the log.
/// Eigenvalues are computed per connected block of the sparsity pattern.
GramianReport pe_gramian(const TrajectoryLog& log, double t, const PEConfig& pe, const GameDefinition& game);

/// Proj_R(r + delta), delta uniform in the ball of radius spec.amplitude.
Vec dither(const ConvexSet& leader_set, const Vec& r, const DitherSpec& spec, Rng& rng);

/// Post hoc check of ||theta_hat(T) - theta|| < eps_theta on the Gramian
/// subset, given a window [T, T + tau0] with Gramian >= alpha0 and
/// ||e_obs|| < eps_obs. With eps_f = 0 and eps_theta = eps_obs sqrt(tau0/alpha0)
/// this is the matched-model bound.
struct ParameterBoundReport {
  bool applicable = false;  ///< settled, window inside the log, ground truth known
  std::string reason;
  double settling = 0.0;
  double min_eig = 0.0;
  bool excitation_ok = false;
  bool window_error_ok = false;
  double eps_theta = 0.0;
  double error = 0.0;          ///< ||theta_hat(T) - theta|| on the subset
  double max_abs_error = 0.0;  ///< max |theta_hat(T) - theta| on the subset
  std::vector<int> coords;
  bool holds = false;
};

ParameterBoundReport parameter_bound_check(const TrajectoryLog& log, const GameDefinition& game,
                                           const PEConfig& pe, double eps_obs, double eps_theta);

/// Block-structured symmetric accumulator: coordinates touched together are
/// kept in one dense block; blocks merge when a contribution spans several.
class BlockGramian {
 public:
  void add(const std::vector<int>& coords, const Mat& block, double weight);
  /// Smallest eigenvalue across blocks whose contribution count is positive.
  double min_eig_excited() const;
  std::vector<int> excited_coords() const;
  /// Dense matrix restricted to `coords` (absent entries are zero).
  Mat restricted(const std::vector<int>& coords) const;
  void clear();

 private:
  struct Block {
    std::vector<int> coords;
    Mat m;
    long count = 0;
    mutable std::optional<double> min_eig;
  };
  std::vector<Block> blocks_;
  std::map<int, std::size_t> owner_;
  std::size_t merge(const std::vector<int>& coords);
};

}  // namespace asg
