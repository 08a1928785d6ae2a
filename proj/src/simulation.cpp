#include "asg/simulation.hpp"

#include "asg/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <set>

namespace asg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLyapunovTol = 1e-12;

double sym_min_eig(const Mat& m) {
  if (m.rows() == 0) return kInf;
  if (m.rows() == 1) return m(0, 0);
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool finite(const Vec& v) { return v.allFinite(); }

void append(std::vector<double>& dst, const Vec& v) { dst.insert(dst.end(), v.data(), v.data() + v.size()); }

Vec slice(const std::vector<double>& src, std::size_t i, int width) {
  return Eigen::Map<const Vec>(src.data() + i * static_cast<std::size_t>(width), width);
}

std::pair<std::vector<int>, Mat> integrand_block(const GainMatrix& k, GramianMode mode) {
  if (mode == GramianMode::full) return k.normal_block();
  GainMatrix plain{RowVec::Zero(k.line_grad_a.size()), k.jac_theta};
  return plain.normal_block();
}

}  // namespace

void PEConfig::validate() const {
  if (!(tau0 > 0.0)) throw InputError("pe: tau0 must be positive");
  if (!(alpha0 > 0.0)) throw InputError("pe: alpha0 must be positive");
  for (int c : subset) {
    if (c < 0) throw InputError("pe: subset indices must be non-negative");
  }
}

void DitherSpec::validate() const {
  if (!(amplitude >= 0.0)) throw InputError("dither: amplitude must be >= 0");
  if (!(duration >= 0.0)) throw InputError("dither: duration must be >= 0");
  if (max_repeats < 0) throw InputError("dither: max_repeats must be >= 0");
  if (trigger == DitherTrigger::scheduled) {
    if (times.empty()) throw InputError("dither: scheduled trigger needs times");
    for (std::size_t i = 1; i < times.size(); ++i) {
      if (!(times[i] > times[i - 1])) throw InputError("dither: times must be strictly increasing");
    }
  }
}

void SimConfig::validate() const {
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw InputError("sim: horizon must be >= 0");
  if (!(step > 0.0)) throw InputError("sim: step must be positive");
  if (!(lambda_r > 0.0)) throw InputError("sim: lambda_r must be positive");
  if (record_stride < 1) throw InputError("sim: record_stride must be >= 1");
  estimator.validate();
  switches.validate();
  if (pe) pe->validate();
  if (dither) dither->validate();
}

long SimConfig::step_count() const { return std::lround(std::floor(horizon / step + 1e-9)); }

Vec TrajectoryLog::r_at(std::size_t i) const { return slice(r, i, n_r); }
Vec TrajectoryLog::a_at(std::size_t i) const { return slice(a, i, n_a); }
Vec TrajectoryLog::a_hat_at(std::size_t i) const { return slice(a_hat, i, n_a); }

// ---------------------------------------------------------------------------

std::size_t BlockGramian::merge(const std::vector<int>& coords) {
  std::set<std::size_t> touched;
  std::vector<int> fresh;
  for (int c : coords) {
    auto it = owner_.find(c);
    if (it == owner_.end()) {
      fresh.push_back(c);
    } else {
      touched.insert(it->second);
    }
  }
  if (touched.size() == 1 && fresh.empty()) return *touched.begin();

  Block merged;
  for (std::size_t b : touched) {
    merged.coords.insert(merged.coords.end(), blocks_[b].coords.begin(), blocks_[b].coords.end());
    merged.count += blocks_[b].count;
  }
  merged.coords.insert(merged.coords.end(), fresh.begin(), fresh.end());
  std::sort(merged.coords.begin(), merged.coords.end());
  const auto n = static_cast<Eigen::Index>(merged.coords.size());
  merged.m = Mat::Zero(n, n);
  std::map<int, Eigen::Index> pos;
  for (Eigen::Index i = 0; i < n; ++i) pos[merged.coords[static_cast<std::size_t>(i)]] = i;
  for (std::size_t b : touched) {
    const Block& old = blocks_[b];
    for (std::size_t i = 0; i < old.coords.size(); ++i) {
      for (std::size_t j = 0; j < old.coords.size(); ++j) {
        merged.m(pos[old.coords[i]], pos[old.coords[j]]) = old.m(static_cast<Eigen::Index>(i),
                                                                 static_cast<Eigen::Index>(j));
      }
    }
  }

  std::vector<Block> kept;
  kept.reserve(blocks_.size() + 1 - touched.size());
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (!touched.count(b)) kept.push_back(std::move(blocks_[b]));
  }
  kept.push_back(std::move(merged));
  blocks_ = std::move(kept);
  owner_.clear();
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (int c : blocks_[b].coords) owner_[c] = b;
  }
  return blocks_.size() - 1;
}

void BlockGramian::add(const std::vector<int>& coords, const Mat& block, double weight) {
  if (coords.empty()) return;
  const std::size_t b = merge(coords);
  Block& blk = blocks_[b];
  if (blk.coords == coords) {
    blk.m.noalias() += weight * block;
  } else {
    std::vector<Eigen::Index> idx(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
      idx[i] = std::lower_bound(blk.coords.begin(), blk.coords.end(), coords[i]) - blk.coords.begin();
    }
    for (std::size_t i = 0; i < coords.size(); ++i) {
      for (std::size_t j = 0; j < coords.size(); ++j) {
        blk.m(idx[i], idx[j]) += weight * block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  // Negative weights retire an earlier contribution.
  blk.count += weight >= 0.0 ? 1 : -1;
  if (blk.count <= 0) {
    blk.count = 0;
    blk.m.setZero();
  }
  blk.min_eig.reset();
}

double BlockGramian::min_eig_excited() const {
  double best = kInf;
  for (const Block& b : blocks_) {
    if (b.count <= 0) continue;
    if (!b.min_eig) b.min_eig = sym_min_eig(b.m);
    best = std::min(best, *b.min_eig);
  }
  return best == kInf ? 0.0 : best;
}

std::vector<int> BlockGramian::excited_coords() const {
  std::vector<int> out;
  for (const Block& b : blocks_) {
    if (b.count > 0) out.insert(out.end(), b.coords.begin(), b.coords.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Mat BlockGramian::restricted(const std::vector<int>& coords) const {
  const auto n = static_cast<Eigen::Index>(coords.size());
  Mat out = Mat::Zero(n, n);
  std::map<int, Eigen::Index> pos;
  for (Eigen::Index i = 0; i < n; ++i) pos[coords[static_cast<std::size_t>(i)]] = i;
  for (const Block& b : blocks_) {
    for (std::size_t i = 0; i < b.coords.size(); ++i) {
      auto pi = pos.find(b.coords[i]);
      if (pi == pos.end()) continue;
      for (std::size_t j = 0; j < b.coords.size(); ++j) {
        auto pj = pos.find(b.coords[j]);
        if (pj == pos.end()) continue;
        out(pi->second, pj->second) = b.m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  return out;
}

void BlockGramian::clear() {
  blocks_.clear();
  owner_.clear();
}

// ---------------------------------------------------------------------------

Vec dither(const ConvexSet& leader_set, const Vec& r, const DitherSpec& spec, Rng& rng) {
  if (spec.amplitude == 0.0) return r;
  return leader_set.project_point(r + rng.in_ball(static_cast<int>(r.size()), spec.amplitude));
}

namespace {

// Trailing-window Gramian maintained step by step (rectangle rule).
class TrailingGramian {
 public:
  TrailingGramian(const PEConfig& pe, double h)
      : pe_(pe), h_(h), window_steps_(static_cast<std::size_t>(std::lround(pe.tau0 / h))) {}

  void push(std::vector<int> coords, Mat block) {
    acc_.add(coords, block, h_);
    window_.push_back({std::move(coords), std::move(block)});
    if (window_.size() > window_steps_) {
      acc_.add(window_.front().first, window_.front().second, -h_);
      window_.pop_front();
    }
  }

  double min_eig() const {
    if (pe_.subset.empty()) return acc_.min_eig_excited();
    return sym_min_eig(acc_.restricted(pe_.subset));
  }

 private:
  const PEConfig& pe_;
  double h_;
  std::size_t window_steps_;
  BlockGramian acc_;
  std::deque<std::pair<std::vector<int>, Mat>> window_;
};

}  // namespace

RunResult run(const GameDefinition& game, const SimConfig& cfg) {
  cfg.validate();
  if (!game.model) throw InputError("run: game has no model");
  const ParameterizedModel& model = *game.model;
  const ConvexSet& rset = game.leader_set;
  const ConvexSet& theta_set = model.theta_set();
  const double h = cfg.step;
  const long n_steps = cfg.step_count();
  const OptimizerConfig opt = cfg.optimizer();

  Rng rng(cfg.seed);
  Vec r = cfg.initial_r ? *cfg.initial_r : rng.in_set(rset);
  Vec theta_hat = cfg.initial_theta ? *cfg.initial_theta : rng.in_set(theta_set);
  if (r.size() != rset.dim()) throw InputError("run: initial r has wrong dimension");
  if (theta_hat.size() != model.n_theta()) throw InputError("run: initial theta has wrong dimension");
  if (!rset.contains(r)) throw InputError("run: initial r outside the leader set");
  if (!theta_set.contains(theta_hat)) throw InputError("run: initial theta outside Theta");
  r = rset.project_point(r);
  theta_hat = theta_set.project_point(theta_hat);

  RunResult out;
  TrajectoryLog& log = out.log;
  RunDiagnostics& diag = out.diagnostics;
  log.n_r = static_cast<int>(r.size());
  log.n_a = model.n_a();
  log.step = h;
  log.record_stride = cfg.record_stride;
  log.theta_initial = theta_hat;
  const std::size_t expected = static_cast<std::size_t>(n_steps / cfg.record_stride + 2);
  for (auto* col : {&log.t, &log.e_norm, &log.lambda_e, &log.j, &log.j_hat, &log.h, &log.stationarity,
                    &log.theta_err, &log.gramian_mineig, &log.theta_step}) {
    col->reserve(expected);
  }
  log.r.reserve(expected * static_cast<std::size_t>(log.n_r));
  log.a.reserve(expected * static_cast<std::size_t>(log.n_a));
  log.a_hat.reserve(expected * static_cast<std::size_t>(log.n_a));

  FollowerStrategy follower = game.follower;
  std::size_t next_switch = 0;
  const auto& switches = cfg.switches.switches;

  EstimatorState est;
  est.params = cfg.estimator;
  const double lambda_theta = cfg.estimator.lambda_theta;

  std::optional<TrailingGramian> trailing;
  if (cfg.pe) trailing.emplace(*cfg.pe, h);

  // Dither bookkeeping.
  double dither_until = -kInf;
  bool episode_open = false;
  int dither_repeats = 0;
  std::size_t next_scheduled = 0;
  auto start_episode = [&](double t0) {
    dither_until = t0 + cfg.dither->duration;
    episode_open = true;
    log.dither_episodes.emplace_back(t0, dither_until);
  };

  Vec prev_e;
  double last_activation = kNaN;
  diag.min_activation_gap = kInf;
  long last_active_step = -1;
  long last_good = -1;

  for (long k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * h;

    while (next_switch < switches.size() && switches[next_switch].time <= t + 1e-9 * h) {
      follower = switches[next_switch].follower;
      log.switch_events.push_back({t, follower.label});
      ++next_switch;
    }

    if (cfg.dither) {
      const DitherSpec& ds = *cfg.dither;
      if (ds.trigger == DitherTrigger::scheduled) {
        while (next_scheduled < ds.times.size() && ds.times[next_scheduled] <= t + 1e-9 * h) {
          start_episode(ds.times[next_scheduled]);
          ++next_scheduled;
        }
      }
      // An episode that just ended is extended while excitation is short.
      if (episode_open && t >= dither_until) {
        episode_open = false;
        if (cfg.pe && dither_repeats < ds.max_repeats && trailing->min_eig() < cfg.pe->alpha0) {
          ++dither_repeats;
          start_episode(t);
        }
      }
    }
    const bool dithering = cfg.dither && t < dither_until;
    const Vec played = dithering ? dither(rset, r, *cfg.dither, rng) : r;

    Observation obs{played, follower.respond(played), 0.0};
    obs.j_obs = game.cost(played, obs.a);
    const Vec a_hat = predicted_response(model, theta_hat, played);
    const double j_hat = game.cost(played, a_hat);
    Vec e(a_hat.size() + 1);
    e.head(a_hat.size()) = a_hat - obs.a;
    e[a_hat.size()] = j_hat - obs.j_obs;
    const double e_norm = e.norm();

    if (!finite(played) || !finite(obs.a) || !finite(a_hat) || !std::isfinite(obs.j_obs) ||
        !std::isfinite(j_hat) || !finite(theta_hat)) {
      diag.all_finite = false;
      throw SimulationError("non-finite state at t = " + std::to_string(t), last_good);
    }

    const double lambda_prev = est.lambda_e;
    const bool was_started = est.started;
    est.lambda_e = switching_update(est, e_norm);
    est.started = true;
    const bool active = est.lambda_e != 0.0;
    if (active) last_active_step = k;

    if (prev_e.size() == e.size()) diag.max_error_rate = std::max(diag.max_error_rate, (e - prev_e).norm() / h);
    prev_e = e;
    if (active && (lambda_prev == 0.0)) {
      ++diag.activations;
      if (!std::isnan(last_activation)) diag.min_activation_gap = std::min(diag.min_activation_gap, t - last_activation);
      last_activation = t;
    }
    if (cfg.dither && cfg.dither->trigger == DitherTrigger::on_lambda_zero && !active &&
        (lambda_prev != 0.0 || !was_started) && t >= dither_until) {
      dither_repeats = 0;
      start_episode(t + h);
    }

    GainMatrix gain;
    const bool need_gain = active || trailing.has_value();
    if (need_gain) gain = GainMatrix{segment_cost_gradient(game, played, obs.a, a_hat), model.jac_theta(played)};
    if (trailing) {
      auto [cols, block] = integrand_block(gain, cfg.pe->mode);
      trailing->push(std::move(cols), std::move(block));
    }

    const bool record = (k % cfg.record_stride == 0) || k == n_steps;
    if (record) {
      log.t.push_back(t);
      append(log.r, played);
      append(log.a, obs.a);
      append(log.a_hat, a_hat);
      log.e_norm.push_back(e_norm);
      log.lambda_e.push_back(est.lambda_e);
      log.j.push_back(obs.j_obs);
      log.j_hat.push_back(j_hat);
      log.h.push_back(follower.cost ? follower.cost(obs.a, played) : kNaN);
      log.stationarity.push_back(stationarity_residual(game, r, theta_hat));
      log.theta_err.push_back(follower.true_theta ? (theta_hat - *follower.true_theta).norm() : kNaN);
      log.gramian_mineig.push_back(trailing ? trailing->min_eig() : kNaN);
      log.theta_step.push_back(0.0);
    }
    diag.max_abs_r = std::max(diag.max_abs_r, played.cwiseAbs().maxCoeff());
    diag.max_abs_theta = std::max(diag.max_abs_theta, theta_hat.size() ? theta_hat.cwiseAbs().maxCoeff() : 0.0);
    diag.max_e_norm = std::max(diag.max_e_norm, e_norm);
    last_good = static_cast<long>(log.size()) - 1;

    if (k == n_steps) break;

    // Updates use the values at t_k.
    Vec theta_next = theta_hat;
    if (active) {
      Vec inc = cfg.estimator_override ? cfg.estimator_override(theta_hat, e, gain, h, est.lambda_e)
                                       : Vec((-h * est.lambda_e) * gain.apply_transpose(e));
      theta_next = theta_set.project_point(theta_hat + inc);

      if (follower.true_theta) {
        const Vec& theta = *follower.true_theta;
        const Vec d = theta_next - theta_hat;
        const double dv = d.dot(d + 2.0 * (theta_hat - theta));
        const Vec kte = gain.apply_transpose(e);
        const double quad = h * h * est.lambda_e * est.lambda_e * kte.squaredNorm();
        const Vec f_theta = predicted_response(model, theta, played);
        Vec e_f(e.size());
        e_f.head(a_hat.size()) = f_theta - obs.a;
        e_f[a_hat.size()] = gain.line_grad_a.dot(f_theta - obs.a);
        const double sharp = -2.0 * h * est.lambda_e * (e - e_f).dot(e) + quad;
        const double tol = kLyapunovTol * std::max(1.0, (theta_hat - theta).squaredNorm());
        const double margin = sharp - dv;
        if (diag.lyapunov_steps == 0 || margin < diag.lyapunov_worst_margin) diag.lyapunov_worst_margin = margin;
        ++diag.lyapunov_steps;
        if (margin < -tol) ++diag.lyapunov_violations;
        if (e_f.norm() <= e_norm) {
          const double dm = quad - dv;
          if (diag.decrease_steps == 0 || dm < diag.decrease_worst_margin) diag.decrease_worst_margin = dm;
          ++diag.decrease_steps;
          if (dm < -tol) ++diag.decrease_violations;
        } else {
          ++diag.decrease_skipped;
        }
      }
    }
    Vec r_next = leader_step(game, r, theta_hat, opt);
    if (!finite(theta_next) || !finite(r_next)) {
      diag.all_finite = false;
      throw SimulationError("non-finite update after t = " + std::to_string(t), last_good);
    }
    if (record) log.theta_step.back() = (theta_next - theta_hat).norm();
    theta_hat = std::move(theta_next);
    r = std::move(r_next);
  }

  if (last_active_step < 0) {
    log.settling = 0.0;
  } else if (last_active_step < n_steps) {
    log.settling = static_cast<double>(last_active_step + 1) * h;
  }
  log.theta_final = theta_hat;
  log.r_final = r;
  log.true_theta_final = follower.true_theta;
  log.matched_final = follower.matched;

  diag.dwell_bound =
      diag.max_error_rate > 0.0 ? (cfg.estimator.eps_obs - cfg.estimator.eps_obs_prime) / diag.max_error_rate : 0.0;
  diag.dwell_ok = diag.activations < 2 || diag.min_activation_gap >= diag.dwell_bound;
  (void)lambda_theta;
  return out;
}

std::optional<double> settling_time(const TrajectoryLog& log) {
  if (log.settling) return log.settling;
  // Logs assembled outside run(): scan the recorded switching signal.
  if (log.lambda_e.empty() || log.lambda_e.back() != 0.0) return std::nullopt;
  std::size_t i = log.lambda_e.size();
  while (i > 0 && log.lambda_e[i - 1] == 0.0) --i;
  return log.t[i == 0 ? 0 : i];
}

GramianReport pe_gramian(const TrajectoryLog& log, double t, const PEConfig& pe, const GameDefinition& game) {
  pe.validate();
  if (log.size() < 2) throw InputError("pe_gramian: log too short");
  const double t_end = t + pe.tau0;
  const double slack = 1e-9 * std::max(1.0, std::abs(t_end));
  if (t < log.t.front() - slack || t_end > log.t.back() + slack) {
    throw InputError("pe_gramian: window exceeds the log");
  }
  if (!pe.excited_only && pe.subset.empty() && game.model->n_theta() == 0) {
    throw InputError("pe_gramian: empty coordinate set");
  }
  for (int c : pe.subset) {
    if (c < 0 || c >= game.model->n_theta()) throw InputError("pe_gramian: subset index out of range");
  }

  BlockGramian acc;
  auto lo = std::lower_bound(log.t.begin(), log.t.end(), t - slack);
  std::size_t first = static_cast<std::size_t>(lo - log.t.begin());
  std::size_t last = first;
  while (last + 1 < log.size() && log.t[last + 1] <= t_end + slack) ++last;
  for (std::size_t i = first; i < last; ++i) {
    const double dt = log.t[i + 1] - log.t[i];
    for (std::size_t s : {i, i + 1}) {
      const Vec r = log.r_at(s);
      GainMatrix k{segment_cost_gradient(game, r, log.a_at(s), log.a_hat_at(s)), game.model->jac_theta(r)};
      auto [cols, block] = integrand_block(k, pe.mode);
      acc.add(cols, block, dt / 2.0);
    }
  }

  GramianReport rep;
  if (!pe.subset.empty()) {
    rep.coords = pe.subset;
    std::sort(rep.coords.begin(), rep.coords.end());
  } else if (pe.excited_only) {
    rep.coords = acc.excited_coords();
  } else {
    rep.coords.resize(static_cast<std::size_t>(game.model->n_theta()));
    std::iota(rep.coords.begin(), rep.coords.end(), 0);
  }
  if (rep.coords.empty()) throw InputError("pe_gramian: empty coordinate subset");
  rep.gramian = acc.restricted(rep.coords);

  // Block-diagonal eigenvalues: coordinates not coupled through any nonzero
  // entry are treated separately.
  const auto n = rep.gramian.rows();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (rep.gramian(i, j) != 0.0) parent[static_cast<std::size_t>(find(i))] = find(j);
    }
  }
  std::map<Eigen::Index, std::vector<Eigen::Index>> groups;
  for (Eigen::Index i = 0; i < n; ++i) groups[find(i)].push_back(i);
  rep.min_eig = kInf;
  for (const auto& [root, members] : groups) {
    const auto m = static_cast<Eigen::Index>(members.size());
    Mat sub(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) sub(i, j) = rep.gramian(members[i], members[j]);
    }
    rep.min_eig = std::min(rep.min_eig, sym_min_eig(sub));
  }
  return rep;
}

ParameterBoundReport parameter_bound_check(const TrajectoryLog& log, const GameDefinition& game,
                                           const PEConfig& pe, double eps_obs, double eps_theta) {
  ParameterBoundReport rep;
  rep.eps_theta = eps_theta;
  if (!log.true_theta_final) {
    rep.reason = "no ground truth";
    return rep;
  }
  const auto settled = settling_time(log);
  if (!settled) {
    rep.reason = "estimator still active at the horizon";
    return rep;
  }
  rep.settling = *settled;
  if (rep.settling + pe.tau0 > log.t.back() + 1e-9) {
    rep.reason = "window [T, T + tau0] exceeds the horizon";
    return rep;
  }
  rep.applicable = true;
  const GramianReport g = pe_gramian(log, rep.settling, pe, game);
  rep.coords = g.coords;
  rep.min_eig = g.min_eig;
  rep.excitation_ok = g.min_eig >= pe.alpha0;
  rep.window_error_ok = true;
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (log.t[i] >= rep.settling - 1e-9 && log.t[i] <= rep.settling + pe.tau0 + 1e-9 && !(log.e_norm[i] < eps_obs)) {
      rep.window_error_ok = false;
    }
  }
  // theta_hat is frozen after T, so the final estimate is theta_hat(T).
  const Vec& theta = *log.true_theta_final;
  double sq = 0.0;
  for (int c : rep.coords) {
    const double d = log.theta_final[c] - theta[c];
    sq += d * d;
    rep.max_abs_error = std::max(rep.max_abs_error, std::abs(d));
  }
  rep.error = std::sqrt(sq);
  rep.holds = rep.excitation_ok && rep.window_error_ok && rep.error < eps_theta;
  if (!rep.excitation_ok) rep.reason = "window Gramian below alpha0";
  if (!rep.window_error_ok) rep.reason = "observation error reached eps_obs in the window";
  return rep;
}

}  // namespace asg
