#include "asg/scenario_config.hpp"

#include "asg/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace asg {

namespace {

using nlohmann::json;

class Problems {
 public:
  void add(const std::string& key, const std::string& what) { items_.push_back(key + ": " + what); }
  bool empty() const { return items_.empty(); }
  std::string joined() const {
    std::string out;
    for (const auto& s : items_) out += "\n  " + s;
    return out;
  }

 private:
  std::vector<std::string> items_;
};

void check_keys(const json& obj, const std::string& section, const std::set<std::string>& allowed, Problems& p) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) p.add(section + "." + it.key(), "unknown key");
  }
}

template <class T>
bool read(const json& obj, const std::string& section, const char* key, T& out, Problems& p) {
  if (!obj.contains(key)) return false;
  try {
    out = obj.at(key).get<T>();
    return true;
  } catch (const json::exception&) {
    p.add(section + "." + key, "wrong type");
    return false;
  }
}

bool read_number(const json& obj, const std::string& section, const char* key, double& out, Problems& p) {
  if (!obj.contains(key)) return false;
  if (!obj.at(key).is_number()) {
    p.add(section + "." + key, "expected a number");
    return false;
  }
  out = obj.at(key).get<double>();
  if (!std::isfinite(out)) p.add(section + "." + key, "must be finite");
  return true;
}

bool read_vector(const json& obj, const std::string& section, const char* key, Vec& out, Problems& p) {
  if (!obj.contains(key)) return false;
  const json& v = obj.at(key);
  if (!v.is_array()) {
    p.add(section + "." + key, "expected an array of numbers");
    return false;
  }
  out.resize(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      p.add(section + "." + key, "expected an array of numbers");
      return false;
    }
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return true;
}

const json* section(const json& doc, const char* name, Problems& p) {
  if (!doc.contains(name)) return nullptr;
  const json& s = doc.at(name);
  if (!s.is_object()) {
    p.add(name, "expected an object");
    return nullptr;
  }
  return &s;
}

}  // namespace

ScenarioFile parse_scenario(const std::string& text, const std::string& name) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw InputError("config " + name + ": malformed document: " + e.what());
  }
  if (!doc.is_object()) throw InputError("config " + name + ": top level must be an object");

  Problems p;
  ScenarioFile f;
  f.name = name;
  check_keys(doc, "", {"scenario", "sim", "switches", "pe", "dither", "output"}, p);

  // scenario
  int links = 2;
  double c0 = 1.0;
  if (const json* s = section(doc, "scenario", p)) {
    check_keys(*s, "scenario", {"links", "c0", "r_total", "a_total", "weights", "n_rbf"}, p);
    read(*s, "scenario", "links", links, p);
    read_number(*s, "scenario", "c0", c0, p);
    if (links < 1) p.add("scenario.links", "must be >= 1");
    if (!(c0 > 0.0)) p.add("scenario.c0", "must be positive");
  } else {
    p.add("scenario", "missing section");
  }
  if (links >= 1 && c0 > 0.0) f.scenario = ddos::DdosScenario::standard(links, c0);
  if (const json* s = section(doc, "scenario", p)) {
    read_number(*s, "scenario", "r_total", f.scenario.r_total, p);
    read_number(*s, "scenario", "a_total", f.scenario.a_total, p);
    read_vector(*s, "scenario", "weights", f.scenario.weights, p);
    read(*s, "scenario", "n_rbf", f.n_rbf, p);
    if (f.n_rbf < 1) p.add("scenario.n_rbf", "must be >= 1");
    try {
      f.scenario.validate();
    } catch (const InputError& e) {
      p.add("scenario", e.what());
    }
  }

  // sim
  SimConfig& sim = f.sim;
  if (const json* s = section(doc, "sim", p)) {
    check_keys(*s, "sim",
               {"horizon", "step", "seed", "lambda_theta", "lambda_r", "eps_obs", "eps_obs_prime", "initial_r",
                "initial_theta", "record_stride"},
               p);
    read_number(*s, "sim", "horizon", sim.horizon, p);
    read_number(*s, "sim", "step", sim.step, p);
    read(*s, "sim", "seed", sim.seed, p);
    read_number(*s, "sim", "lambda_theta", sim.estimator.lambda_theta, p);
    read_number(*s, "sim", "lambda_r", sim.lambda_r, p);
    read_number(*s, "sim", "eps_obs", sim.estimator.eps_obs, p);
    read_number(*s, "sim", "eps_obs_prime", sim.estimator.eps_obs_prime, p);
    read(*s, "sim", "record_stride", sim.record_stride, p);
    for (const char* key : {"initial_r", "initial_theta"}) {
      if (!s->contains(key)) continue;
      const json& v = s->at(key);
      const bool is_r = std::string(key) == "initial_r";
      if (v.is_string()) {
        const auto mode = v.get<std::string>();
        if (mode == "zero" && !is_r) {
          sim.initial_theta = Vec::Zero(links * static_cast<int>(std::pow(f.n_rbf, links - 1)));
        } else if (mode != "random") {
          p.add(std::string("sim.") + key, "expected \"random\"" + std::string(is_r ? "" : ", \"zero\"") +
                                               " or a vector");
        }
      } else {
        Vec x;
        if (read_vector(*s, "sim", key, x, p)) (is_r ? sim.initial_r : sim.initial_theta) = x;
      }
    }
    if (sim.initial_r && links >= 1) {
      if (sim.initial_r->size() != links) {
        p.add("sim.initial_r", "expected " + std::to_string(links) + " entries");
      } else if (!ConvexSet::simplex(f.scenario.r_total, links).contains(*sim.initial_r)) {
        p.add("sim.initial_r", "must be nonnegative and sum to scenario.r_total");
      }
    }
    if (sim.initial_theta && links >= 1) {
      const auto n = links * static_cast<int>(std::pow(f.n_rbf, links - 1));
      if (sim.initial_theta->size() != n) {
        p.add("sim.initial_theta", "expected " + std::to_string(n) + " entries");
      } else if (!ConvexSet::uniform_box(n, 0.0, f.scenario.c0).contains(*sim.initial_theta)) {
        p.add("sim.initial_theta", "entries must lie in [0, c0]");
      }
    }
    if (sim.estimator.eps_obs_prime >= sim.estimator.eps_obs) {
      p.add("sim.eps_obs_prime", "must be smaller than sim.eps_obs");
    }
    try {
      SimConfig probe = sim;
      probe.switches = {};
      probe.pe.reset();
      probe.dither.reset();
      probe.validate();
    } catch (const InputError& e) {
      p.add("sim", e.what());
    }
  }

  // switches
  if (doc.contains("switches")) {
    const json& sw = doc.at("switches");
    if (!sw.is_array()) {
      p.add("switches", "expected an array");
    } else {
      double last = -INFINITY;
      for (std::size_t i = 0; i < sw.size(); ++i) {
        const std::string where = "switches[" + std::to_string(i) + "]";
        if (!sw[i].is_object()) {
          p.add(where, "expected an object");
          continue;
        }
        check_keys(sw[i], where, {"time", "weights"}, p);
        ScenarioFile::Switch s;
        if (!read_number(sw[i], where, "time", s.time, p)) p.add(where + ".time", "missing");
        if (!read_vector(sw[i], where, "weights", s.weights, p)) p.add(where + ".weights", "missing");
        if (s.weights.size() != links) p.add(where + ".weights", "needs one entry per link");
        if (!(s.time > last)) p.add(where + ".time", "switch times must be strictly increasing");
        last = s.time;
        f.switches.push_back(s);
      }
    }
  }

  // pe
  if (const json* s = section(doc, "pe", p)) {
    check_keys(*s, "pe", {"tau0", "alpha0", "mode", "subset"}, p);
    PEConfig pe;
    read_number(*s, "pe", "tau0", pe.tau0, p);
    read_number(*s, "pe", "alpha0", pe.alpha0, p);
    std::string mode = "full";
    read(*s, "pe", "mode", mode, p);
    if (mode == "full") {
      pe.mode = GramianMode::full;
    } else if (mode == "simplified") {
      pe.mode = GramianMode::simplified;
    } else {
      p.add("pe.mode", "expected \"full\" or \"simplified\"");
    }
    if (s->contains("subset")) {
      const json& v = s->at("subset");
      if (v.is_string() && v.get<std::string>() == "excited") {
        pe.excited_only = true;
      } else if (v.is_string() && v.get<std::string>() == "all") {
        pe.excited_only = false;
      } else if (v.is_array()) {
        try {
          pe.subset = v.get<std::vector<int>>();
        } catch (const json::exception&) {
          p.add("pe.subset", "expected integer indices");
        }
        if (v.empty()) p.add("pe.subset", "must not be empty");
      } else {
        p.add("pe.subset", "expected \"excited\", \"all\" or an index list");
      }
    }
    try {
      pe.validate();
    } catch (const InputError& e) {
      p.add("pe", e.what());
    }
    sim.pe = pe;
  }

  // dither
  if (const json* s = section(doc, "dither", p)) {
    check_keys(*s, "dither", {"amplitude", "duration", "trigger", "times", "max_repeats"}, p);
    DitherSpec d;
    if (s->contains("amplitude") && s->at("amplitude").is_string()) {
      if (s->at("amplitude").get<std::string>() == "default") {
        f.dither_default_amplitude = true;
      } else {
        p.add("dither.amplitude", "expected a number or \"default\"");
      }
    } else if (!read_number(*s, "dither", "amplitude", d.amplitude, p)) {
      f.dither_default_amplitude = true;
    }
    read_number(*s, "dither", "duration", d.duration, p);
    read(*s, "dither", "max_repeats", d.max_repeats, p);
    std::string trigger = "on_lambda_zero";
    read(*s, "dither", "trigger", trigger, p);
    if (trigger == "on_lambda_zero") {
      d.trigger = DitherTrigger::on_lambda_zero;
    } else if (trigger == "scheduled") {
      d.trigger = DitherTrigger::scheduled;
    } else {
      p.add("dither.trigger", "expected \"on_lambda_zero\" or \"scheduled\"");
    }
    Vec times;
    if (read_vector(*s, "dither", "times", times, p)) d.times.assign(times.data(), times.data() + times.size());
    try {
      d.validate();
    } catch (const InputError& e) {
      p.add("dither", e.what());
    }
    sim.dither = d;
  }

  // output
  if (const json* s = section(doc, "output", p)) {
    check_keys(*s, "output", {"directory", "formats"}, p);
    read(*s, "output", "directory", f.output_directory, p);
    std::vector<std::string> formats;
    if (read(*s, "output", "formats", formats, p)) {
      f.write_csv = f.write_summary = f.write_plots = false;
      for (const auto& fmt : formats) {
        if (fmt == "csv") {
          f.write_csv = true;
        } else if (fmt == "summary") {
          f.write_summary = true;
        } else if (fmt == "plots") {
          f.write_plots = true;
        } else {
          p.add("output.formats", "unknown format \"" + fmt + "\"");
        }
      }
    }
  }
  if (f.output_directory.empty()) f.output_directory = name;

  if (!p.empty()) throw InputError("config " + name + " is invalid:" + p.joined());
  return f;
}

ScenarioFile load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), std::filesystem::path(path).stem().string());
}

BuiltScenario build_scenario(const ScenarioFile& file) {
  BuiltScenario b;
  const ddos::DdosScenario& sc = file.scenario;
  auto model = ddos::build_rbf_model(sc.links, file.n_rbf, sc.c0, sc.r_total);
  b.model = model;
  b.game = ddos::make_game(sc, model);
  b.sim = file.sim;
  b.phases.push_back(sc);
  for (const auto& s : file.switches) {
    ddos::DdosScenario next = sc;
    next.weights = s.weights;
    next.validate();
    b.phases.push_back(next);
    FollowerStrategy follower = ddos::make_follower(next, *model);
    follower.label = "weights switch";
    b.sim.switches.switches.push_back({s.time, std::move(follower)});
  }
  if (b.sim.dither && file.dither_default_amplitude) {
    b.sim.dither->amplitude = 0.1 * b.game.leader_set.diameter();
  }
  b.sim.validate();
  return b;
}

}  // namespace asg
