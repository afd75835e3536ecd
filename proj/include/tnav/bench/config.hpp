#pragma once

#include "tnav/errors.hpp"
#include "tnav/sim/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tnav::bench {

/// Config text could not be read or is not valid JSON.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

enum class MapKind { Empty, Cylinder, Forest, File };

/// One map group of a benchmark: `count` maps of one kind, each run `trials` times.
struct MapSpec {
  std::string name;
  MapKind kind = MapKind::Forest;
  int count = 1;
  int trials = 10;
  double area = 100.0;    // forest, m^2
  double density = 0.2;   // forest, trees per m^2
  int obstacles = 30;     // cylinder map
  std::string path;       // file map
  std::optional<std::pair<double, double>> start;  // default depends on the map kind
  std::vector<std::pair<double, double>> goals;    // empty: default for the map kind
  std::optional<double> time_limit;
  std::optional<double> goal_tolerance;
};

struct BenchmarkSpec {
  std::vector<MapSpec> maps;
  std::string output_dir = "bench_out";
  std::uint64_t seed = 1;
  double trial_jitter = 0.2;  // start position perturbation per trial, meters
  bool write_traces = true;
  int jobs = 1;
};

struct TimingCase {
  double d_v = 0.2;
  int n_v = 110;
  int n_phi = 31;
  int n_theta = 21;
};

struct TimingSpec {
  std::vector<TimingCase> cases{{0.2, 110, 31, 21}, {0.1, 220, 31, 21}, {0.1, 220, 31, 41}};
  int warmup = 50;
  int cycles = 100;
  int init_repeats = 3;
};

/// Scenario defaults shared by every map of a benchmark.
struct ScenarioDefaults {
  double altitude = 1.5;
  double goal_tolerance = 0.5;
  double time_limit = 40.0;
};

struct Config {
  sim::Parameters params;
  ScenarioDefaults scenario;
  BenchmarkSpec benchmark;
  TimingSpec timing;
};

/// Parameter set used when a config leaves a value out.
inline sim::Parameters default_parameters() {
  sim::Parameters p;
  p.nav.grid = {0.2, 110, 110, 110};
  p.nav.tentacles = TentacleConfig{};
  p.nav.map.resolution = p.nav.grid.voxel_size;
  p.nav.map.bound_radius = p.nav.grid.extent().norm();
  p.nav.heuristics = {0.05, 0.0, 1.0, 1.0, 1.0, 0.2};
  p.nav.control.mu_min = 0.3;
  return p;
}

namespace detail {

using nlohmann::json;

/// Reads keys out of one JSON object and remembers which ones were used.
class Section {
 public:
  Section(const json& parent, const std::string& key, const std::string& label = "")
      : name_(label.empty() ? key : label) {
    if (!parent.contains(key)) return;
    obj_ = &parent.at(key);
    if (!obj_->is_object()) throw ConfigError(name_ + ": expected an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    if (obj_ == nullptr || !obj_->contains(key)) return;
    used_.insert(key);
    try {
      out = obj_->at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(name_ + "." + key + ": wrong type");
    }
  }

  void get_deg(const char* key, double& out_rad) {
    if (!has(key)) return;
    double deg = 0.0;
    get(key, deg);
    out_rad = deg2rad(deg);
  }

  bool has(const char* key) const { return obj_ != nullptr && obj_->contains(key); }
  const json* raw(const char* key) {
    if (!has(key)) return nullptr;
    used_.insert(key);
    return &obj_->at(key);
  }

  void reject_unknown() const {
    if (obj_ == nullptr) return;
    for (const auto& [k, v] : obj_->items())
      if (!used_.count(k)) throw ConfigError(name_ + ": unknown parameter '" + k + "'");
  }

 private:
  std::string name_;
  const json* obj_ = nullptr;
  std::set<std::string> used_;
};

inline MapKind parse_kind(const std::string& s) {
  if (s == "empty") return MapKind::Empty;
  if (s == "cylinder") return MapKind::Cylinder;
  if (s == "forest") return MapKind::Forest;
  if (s == "file") return MapKind::File;
  throw ConfigError("benchmark.maps: unknown map type '" + s + "'");
}

inline MapSpec parse_map(const json& j, std::size_t index) {
  if (!j.is_object()) throw ConfigError("benchmark.maps: entries must be objects");
  const json wrapper = {{"map", j}};
  Section s(wrapper, "map", "benchmark.maps[" + std::to_string(index) + "]");
  MapSpec m;
  std::string type = "forest";
  s.get("type", type);
  m.kind = parse_kind(type);
  m.name = type;
  s.get("name", m.name);
  s.get("count", m.count);
  s.get("trials", m.trials);
  s.get("area", m.area);
  s.get("density", m.density);
  s.get("obstacles", m.obstacles);
  s.get("path", m.path);
  if (const json* st = s.raw("start")) {
    if (!st->is_array() || st->size() != 2) throw ConfigError("benchmark.maps.start: expected [x, y]");
    m.start = {st->at(0).get<double>(), st->at(1).get<double>()};
  }
  if (const json* gs = s.raw("goals")) {
    if (!gs->is_array() || gs->empty()) throw ConfigError("benchmark.maps.goals: expected [[x, y], ...]");
    for (const auto& g : *gs) {
      if (!g.is_array() || g.size() != 2) throw ConfigError("benchmark.maps.goals: expected [x, y] pairs");
      m.goals.emplace_back(g.at(0).get<double>(), g.at(1).get<double>());
    }
  }
  if (s.has("time_limit")) {
    double v = 0;
    s.get("time_limit", v);
    m.time_limit = v;
  }
  if (s.has("goal_tolerance")) {
    double v = 0;
    s.get("goal_tolerance", v);
    m.goal_tolerance = v;
  }
  s.reject_unknown();
  if (m.count < 1) throw ConfigError("benchmark.maps[" + std::to_string(index) + "]: count must be >= 1");
  if (m.trials < 1) throw ConfigError("benchmark.maps[" + std::to_string(index) + "]: trial count must be >= 1");
  if (m.kind == MapKind::File && m.path.empty())
    throw ConfigError("benchmark.maps[" + std::to_string(index) + "]: file map needs a path");
  return m;
}

}  // namespace detail

/// Builds a Config from JSON text. Parameters use their customary symbol names
/// (d_v, n_v_x, tau_P, alpha_crash, lambda_close, mu_nom, ...); angles are in
/// degrees and angular rates in degrees per second. Missing values keep their
/// defaults; the result is validated.
inline Config parse_config_text(const std::string& text) {
  using nlohmann::json;
  json root;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    root = json::object();
  } else {
    try {
      root = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("config: ") + e.what());
    }
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");

  Config cfg;
  cfg.params = default_parameters();
  auto& P = cfg.params;
  bool map_resolution_set = false;
  bool map_radius_set = false;

  {
    detail::Section s(root, "robot");
    s.get("w_R", P.robot.width);
    s.get("l_R", P.robot.length);
    s.get("h_R", P.robot.height);
    s.get("mu_max", P.robot.mu_max);
    s.get_deg("omega_phi", P.robot.omega_phi);
    s.get_deg("omega_theta", P.robot.omega_theta);
    s.get_deg("omega_psi", P.robot.omega_psi);
    double d_s = P.sensor.resolution * P.sensor.range.x();
    s.get("d_s", d_s);
    s.get("rho_x", P.sensor.range.x());
    s.get("rho_y", P.sensor.range.y());
    s.get("rho_z", P.sensor.range.z());
    if (s.has("d_s")) P.sensor.resolution = d_s / P.sensor.range.x();
    s.reject_unknown();
  }
  {
    detail::Section s(root, "sensor");
    s.get_deg("h_fov", P.sensor.h_fov);
    s.get_deg("v_fov", P.sensor.v_fov);
    s.get_deg("resolution", P.sensor.resolution);
    s.get("f_S", P.sensor.rate);
    s.get("sense_ground", P.sensor.sense_ground);
    s.reject_unknown();
  }
  {
    detail::Section s(root, "offline");
    auto& g = P.nav.grid;
    auto& t = P.nav.tentacles;
    s.get("d_v", g.voxel_size);
    int n_v = 0;
    s.get("n_v", n_v);
    if (n_v != 0) g.nx = g.ny = g.nz = n_v;
    s.get("n_v_x", g.nx);
    s.get("n_v_y", g.ny);
    s.get("n_v_z", g.nz);
    s.get("n_phi", t.n_phi);
    s.get("n_theta", t.n_theta);
    int n_psi = 1;
    s.get("n_psi", n_psi);
    if (n_psi != 1) throw ConfigError("offline: n_psi must be 1 (straight tentacles are roll invariant)");
    s.get_deg("phi", t.phi_cov);
    s.get_deg("theta", t.theta_cov);
    double psi = 0.0;
    s.get("psi", psi);
    if (psi != 0.0) throw ConfigError("offline: psi must be 0 (straight tentacles are roll invariant)");
    s.get("l_t_max", t.l_t_max);
    s.get("delta_d", t.delta_d);
    if (s.has("n_s")) {
      int n_s = 0;
      s.get("n_s", n_s);
      if (n_s < 1) throw ConfigError("offline: n_s must be >= 1");
      t.delta_d = t.l_t_max / n_s;
    }
    s.get("tau_P", t.tau_P);
    s.get("tau_S", t.tau_S);
    s.get("beta_max", t.beta_max);
    s.get("alpha_beta", t.alpha_beta);
    s.reject_unknown();
  }
  {
    detail::Section s(root, "online");
    auto& h = P.nav.heuristics;
    auto& c = P.nav.control;
    s.get("alpha_crash", h.alpha_crash);
    s.get("tau_D_err", h.tau_D_err);
    s.get("lambda_clear", h.lambda_clear);
    s.get("lambda_clut", h.lambda_clut);
    s.get("lambda_close", h.lambda_close);
    s.get("lambda_smo", h.lambda_smo);
    s.get("alpha_omega", c.alpha_omega);
    s.get("mu_nom", c.mu_nom);
    s.get("delta_mu", c.delta_mu);
    s.get("mu_min", c.mu_min);
    s.get("d_t", c.d_t);
    s.reject_unknown();
  }
  {
    detail::Section s(root, "map");
    map_resolution_set = s.has("resolution");
    map_radius_set = s.has("bound_radius");
    s.get("resolution", P.nav.map.resolution);
    s.get("bound_radius", P.nav.map.bound_radius);
    s.reject_unknown();
  }
  if (!map_resolution_set) P.nav.map.resolution = P.nav.grid.voxel_size;
  if (!map_radius_set) P.nav.map.bound_radius = P.nav.grid.extent().norm();
  P.nav.control.mu_max = P.robot.mu_max;
  P.nav.control.omega_max_phi = P.robot.omega_phi;
  {
    detail::Section s(root, "scenario");
    s.get("altitude", cfg.scenario.altitude);
    s.get("goal_tolerance", cfg.scenario.goal_tolerance);
    s.get("time_limit", cfg.scenario.time_limit);
    s.reject_unknown();
  }
  {
    detail::Section s(root, "benchmark");
    auto& b = cfg.benchmark;
    s.get("output_dir", b.output_dir);
    s.get("seed", b.seed);
    s.get("trial_jitter", b.trial_jitter);
    s.get("write_traces", b.write_traces);
    s.get("jobs", b.jobs);
    if (const auto* maps = s.raw("maps")) {
      if (!maps->is_array()) throw ConfigError("benchmark.maps: expected an array");
      for (std::size_t i = 0; i < maps->size(); ++i) b.maps.push_back(detail::parse_map(maps->at(i), i));
    } else {
      MapSpec forest;
      forest.count = 10;
      b.maps.push_back(forest);
    }
    s.reject_unknown();
    if (b.jobs < 1) throw ConfigError("benchmark: jobs must be >= 1");
    if (!(b.trial_jitter >= 0.0)) throw ConfigError("benchmark: trial_jitter must be >= 0");
  }
  {
    detail::Section s(root, "timing");
    auto& t = cfg.timing;
    s.get("warmup", t.warmup);
    s.get("cycles", t.cycles);
    s.get("init_repeats", t.init_repeats);
    if (const auto* cases = s.raw("cases")) {
      if (!cases->is_array()) throw ConfigError("timing.cases: expected an array");
      t.cases.clear();
      for (const auto& c : *cases) {
        const nlohmann::json wrapper = {{"case", c}};
        detail::Section cs(wrapper, "case", "timing.cases");
        TimingCase tc;
        cs.get("d_v", tc.d_v);
        cs.get("n_v", tc.n_v);
        cs.get("n_phi", tc.n_phi);
        cs.get("n_theta", tc.n_theta);
        cs.reject_unknown();
        t.cases.push_back(tc);
      }
    }
    s.reject_unknown();
    if (t.cycles < 1) throw ConfigError("timing: cycles must be >= 1");
    if (t.warmup < 0) throw ConfigError("timing: warmup must be >= 0");
    if (t.init_repeats < 1) throw ConfigError("timing: init_repeats must be >= 1");
    for (const auto& c : t.cases) {
      if (c.n_phi < 1 || c.n_theta < 1) throw ConfigError("timing: a case has zero tentacles");
      if (c.n_v < 2 || c.n_v % 2 != 0) throw ConfigError("timing: n_v must be even and >= 2");
      if (!(c.d_v > 0.0)) throw ConfigError("timing: d_v must be > 0");
    }
  }

  for (const auto& [k, v] : root.items()) {
    static const std::set<std::string> known = {"robot", "sensor", "offline", "online", "map",
                                                "scenario", "benchmark", "timing"};
    if (!known.count(k)) throw ConfigError("config: unknown section '" + k + "'");
  }

  P.validate();
  if (!(cfg.scenario.goal_tolerance > 0.0)) throw ConfigError("scenario: goal_tolerance must be > 0");
  if (!(cfg.scenario.time_limit > 0.0)) throw ConfigError("scenario: time_limit must be > 0");
  return cfg;
}

/// Reads and parses a config file. Throws ParseError when the file cannot be
/// read or is malformed and ConfigError when a value violates an invariant.
inline Config parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace tnav::bench
