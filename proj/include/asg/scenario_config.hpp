#pragma once

#include "asg/ddos.hpp"
#include "asg/simulation.hpp"

#include <memory>
#include <string>
#include <vector>

namespace asg {

/// Scenario file: a JSON document with the sections
///   scenario  { links, c0, r_total, a_total, weights, n_rbf }
///   sim       { horizon, step, seed, lambda_theta, lambda_r, eps_obs,
///               eps_obs_prime, initial_r, initial_theta, record_stride }
///   switches  [ { time, weights } ]
///   pe        { tau0, alpha0, mode, subset }
///   dither    { amplitude, duration, trigger, times, max_repeats }
///   output    { directory, formats }
/// Unknown keys are rejected. initial_r / initial_theta take "random" or an
/// explicit vector; initial_theta also takes "zero". pe.subset takes
/// "excited", "all" or an index list. dither.amplitude "default" means
/// 0.1 * diameter of the leader set.
struct ScenarioFile {
  std::string name;
  ddos::DdosScenario scenario;
  int n_rbf = 4;
  SimConfig sim;
  struct Switch {
    double time = 0.0;
    Vec weights;
  };
  std::vector<Switch> switches;
  bool dither_default_amplitude = false;
  std::string output_directory;
  bool write_csv = true;
  bool write_summary = true;
  bool write_plots = true;
};

/// Throws InputError listing every offending key.
ScenarioFile parse_scenario(const std::string& text, const std::string& name);
ScenarioFile load_scenario_file(const std::string& path);

struct BuiltScenario {
  std::shared_ptr<const ddos::QuasiRbfModel> model;
  GameDefinition game;
  SimConfig sim;  ///< with the switch schedule and resolved dither amplitude
  std::vector<ddos::DdosScenario> phases;  ///< scenario before and after each switch
};

BuiltScenario build_scenario(const ScenarioFile& file);

}  // namespace asg
