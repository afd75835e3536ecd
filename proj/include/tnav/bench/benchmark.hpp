#pragma once

#include "tnav/bench/config.hpp"
#include "tnav/sim/io.hpp"
#include "tnav/sim/scenario.hpp"
#include "tnav/sim/world.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace tnav::bench {

/// Output file could not be written.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// A concrete map of the benchmark with its start and goals.
struct MapInstance {
  std::string name;
  std::size_t spec_index = 0;
  int trials = 1;
  sim::WorldMap world;
  Vec3 start = Vec3::Zero();
  std::vector<Vec3> goals;
  double time_limit = 40.0;
  double goal_tolerance = 0.5;
};

struct TrialRow {
  std::string map;
  int trial = 0;
  std::uint64_t seed = 0;
  sim::Outcome outcome = sim::Outcome::Timeout;
  double duration = 0.0;
  double path_length = 0.0;
  std::string error;  // set when the scenario could not run
};

struct MapAggregate {
  std::string map;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  double duration_mean = 0.0;  // over successful trials
  double duration_std = 0.0;
  double path_length_mean = 0.0;
  double path_length_std = 0.0;
};

struct BenchmarkResults {
  std::vector<TrialRow> rows;             // ordered by (map, trial)
  std::vector<MapAggregate> aggregates;   // one per map, same order
  std::vector<MapInstance> maps;
  std::vector<std::vector<sim::TraceRecord>> traces;  // parallel to rows
};

namespace detail {

inline void mean_std(const std::vector<double>& v, double& mean, double& sd) {
  mean = sd = 0.0;
  if (v.empty()) return;
  mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() < 2) return;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
}

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace detail

/// Success rate and sample mean/std of duration and path length over the
/// successful trials of each map, in order of first appearance.
inline std::vector<MapAggregate> aggregate(const std::vector<TrialRow>& rows) {
  std::vector<MapAggregate> out;
  std::vector<std::vector<double>> durations;
  std::vector<std::vector<double>> lengths;
  for (const auto& r : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const MapAggregate& a) { return a.map == r.map; });
    std::size_t i = static_cast<std::size_t>(it - out.begin());
    if (it == out.end()) {
      out.push_back({r.map});
      durations.emplace_back();
      lengths.emplace_back();
    }
    ++out[i].trials;
    if (r.outcome == sim::Outcome::Success && r.error.empty()) {
      ++out[i].successes;
      durations[i].push_back(r.duration);
      lengths[i].push_back(r.path_length);
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].success_rate = static_cast<double>(out[i].successes) / out[i].trials;
    detail::mean_std(durations[i], out[i].duration_mean, out[i].duration_std);
    detail::mean_std(lengths[i], out[i].path_length_mean, out[i].path_length_std);
  }
  return out;
}

/// Expands the map groups into concrete seeded maps.
inline std::vector<MapInstance> instantiate_maps(const Config& cfg) {
  std::vector<MapInstance> out;
  const auto& bench = cfg.benchmark;
  const double z = cfg.scenario.altitude;
  std::size_t global_index = 0;
  for (std::size_t si = 0; si < bench.maps.size(); ++si) {
    const MapSpec& spec = bench.maps[si];
    for (int c = 0; c < spec.count; ++c, ++global_index) {
      MapInstance m;
      m.name = spec.name + std::to_string(c);
      m.spec_index = si;
      m.trials = spec.trials;
      m.time_limit = spec.time_limit.value_or(cfg.scenario.time_limit);
      m.goal_tolerance = spec.goal_tolerance.value_or(cfg.scenario.goal_tolerance);
      const std::uint64_t seed = sim::mix_seed(bench.seed, global_index);

      std::pair<double, double> start{0.0, 0.0};
      std::vector<std::pair<double, double>> goals;
      switch (spec.kind) {
        case MapKind::Forest: {
          const double side = std::sqrt(spec.area);
          start = {-2.0, 0.5 * side};
          goals = {{side + 2.0, 0.5 * side}};
          break;
        }
        case MapKind::Cylinder:
          start = {-8.0, -8.0};
          goals = {{8.0, 8.0}};
          break;
        case MapKind::Empty:
          start = {0.0, 0.0};
          goals = {{5.0, 0.0}};
          break;
        case MapKind::File:
          break;
      }
      if (spec.start) start = *spec.start;
      if (!spec.goals.empty()) goals = spec.goals;
      if (goals.empty()) throw ConfigError("benchmark: map '" + m.name + "' has no goals");

      std::vector<sim::KeepOut> keep_out{{start.first, start.second, 1.0}};
      for (const auto& g : goals) keep_out.push_back({g.first, g.second, 1.0});

      switch (spec.kind) {
        case MapKind::Forest: {
          sim::ForestOptions fo;
          fo.keep_out = keep_out;
          m.world = sim::generate_forest_map(spec.area, spec.density, seed, fo);
          break;
        }
        case MapKind::Cylinder: {
          sim::CylinderMapOptions co;
          co.count = spec.obstacles;
          co.min_clearance = cfg.params.robot.diagonal();
          co.keep_out = keep_out;
          m.world = sim::generate_cylinder_map(seed, co);
          break;
        }
        case MapKind::Empty:
          m.world.seed = seed;
          m.world.bounds = {-10.0, -10.0, 10.0, 10.0};
          break;
        case MapKind::File: {
          std::ifstream in(spec.path);
          if (!in) throw IoError("cannot read map file " + spec.path);
          m.world = sim::read_map(in);
          break;
        }
      }
      m.start = {start.first, start.second, z};
      for (const auto& g : goals) m.goals.emplace_back(g.first, g.second, z);
      out.push_back(std::move(m));
    }
  }
  return out;
}

/// Scenario for one trial: the map's start, perturbed by the trial seed, facing the first goal.
inline sim::ScenarioConfig trial_scenario(const Config& cfg, const MapInstance& m,
                                          std::uint64_t trial_seed) {
  sim::ScenarioConfig sc;
  sc.world = m.world;
  sc.params = cfg.params;
  sc.goals = m.goals;
  sc.time_limit = m.time_limit;
  sc.goal_tolerance = m.goal_tolerance;
  Vec3 start = m.start;
  if (cfg.benchmark.trial_jitter > 0.0) {
    sim::Rng rng(trial_seed);
    const double j = cfg.benchmark.trial_jitter;
    start.x() += rng.uniform(-j, j);
    start.y() += rng.uniform(-j, j);
  }
  sc.start.p = start;
  const Vec3 to_goal = m.goals.front() - start;
  sc.start.q = yaw_rotation(std::atan2(to_goal.y(), to_goal.x()));
  return sc;
}

/// Runs every (map, trial) pair. Deterministic given the config: trial seeds
/// derive from the global seed, and rows are ordered by (map, trial) whatever
/// the completion order. A trial that throws is recorded with its error.
inline BenchmarkResults run_benchmark(const Config& cfg,
                                      const std::function<void(const TrialRow&)>& progress = {}) {
  BenchmarkResults res;
  res.maps = instantiate_maps(cfg);
  const auto model = sim::build_model(cfg.params);

  struct Job {
    std::size_t map;
    int trial;
  };
  std::vector<Job> jobs;
  for (std::size_t mi = 0; mi < res.maps.size(); ++mi)
    for (int t = 0; t < res.maps[mi].trials; ++t) jobs.push_back({mi, t});
  res.rows.resize(jobs.size());
  res.traces.resize(jobs.size());

  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const MapInstance& m = res.maps[jobs[i].map];
      TrialRow row;
      row.map = m.name;
      row.trial = jobs[i].trial;
      row.seed = sim::mix_seed(cfg.benchmark.seed, jobs[i].map, static_cast<std::uint64_t>(jobs[i].trial) + 1);
      try {
        const auto sc = trial_scenario(cfg, m, row.seed);
        sim::ScenarioResult r = sim::run_scenario(sc, model);
        row.outcome = r.outcome;
        row.duration = r.duration;
        row.path_length = r.path_length;
        res.traces[i] = std::move(r.trace);
      } catch (const std::exception& e) {
        row.outcome = sim::Outcome::Timeout;
        row.error = e.what();
      }
      res.rows[i] = row;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(row);
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(cfg.benchmark.jobs, static_cast<int>(jobs.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  res.aggregates = aggregate(res.rows);
  return res;
}

inline std::string trials_csv(const std::vector<TrialRow>& rows) {
  std::ostringstream os;
  os << "map,trial,seed,outcome,duration_s,path_length_m\n";
  for (const auto& r : rows) {
    os << r.map << ',' << r.trial << ',' << r.seed << ','
       << (r.error.empty() ? std::string(sim::to_string(r.outcome)) : std::string("error")) << ','
       << detail::fixed6(r.duration) << ',' << detail::fixed6(r.path_length) << '\n';
  }
  return os.str();
}

inline std::string aggregates_csv(const std::vector<MapAggregate>& aggs) {
  std::ostringstream os;
  os << "map,trials,successes,success_rate,duration_mean_s,duration_std_s,path_length_mean_m,"
        "path_length_std_m\n";
  for (const auto& a : aggs) {
    os << a.map << ',' << a.trials << ',' << a.successes << ',' << detail::fixed6(a.success_rate) << ','
       << detail::fixed6(a.duration_mean) << ',' << detail::fixed6(a.duration_std) << ','
       << detail::fixed6(a.path_length_mean) << ',' << detail::fixed6(a.path_length_std) << '\n';
  }
  return os.str();
}

inline std::string summary_json(const BenchmarkResults& res, const Config& cfg) {
  nlohmann::ordered_json j;
  j["seed"] = cfg.benchmark.seed;
  int trials = 0;
  int successes = 0;
  for (const auto& a : res.aggregates) {
    trials += a.trials;
    successes += a.successes;
  }
  j["trials"] = trials;
  j["successes"] = successes;
  j["success_rate"] = detail::fixed6(trials > 0 ? static_cast<double>(successes) / trials : 0.0);
  auto& maps = j["maps"] = nlohmann::ordered_json::array();
  for (const auto& a : res.aggregates) {
    maps.push_back({{"map", a.map},
                    {"trials", a.trials},
                    {"successes", a.successes},
                    {"success_rate", detail::fixed6(a.success_rate)},
                    {"duration_mean_s", detail::fixed6(a.duration_mean)},
                    {"duration_std_s", detail::fixed6(a.duration_std)},
                    {"path_length_mean_m", detail::fixed6(a.path_length_mean)},
                    {"path_length_std_m", detail::fixed6(a.path_length_std)}});
  }
  std::vector<std::string> errors;
  for (const auto& r : res.rows)
    if (!r.error.empty()) errors.push_back(r.map + "/" + std::to_string(r.trial) + ": " + r.error);
  j["errors"] = errors;
  return j.dump(2) + "\n";
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace detail

/// Writes trials.csv, aggregates.csv, summary.json, maps/<map>.map and, when
/// enabled, traces/<map>_<trial>.trace under `dir`.
inline void emit_results(const BenchmarkResults& res, const Config& cfg,
                         const std::filesystem::path& dir) {
  if (res.rows.empty()) throw std::invalid_argument("emit_results: no results");
  std::error_code ec;
  std::filesystem::create_directories(dir / "maps", ec);
  if (ec) throw IoError("cannot create " + (dir / "maps").string() + ": " + ec.message());
  detail::write_file(dir / "trials.csv", trials_csv(res.rows));
  detail::write_file(dir / "aggregates.csv", aggregates_csv(res.aggregates));
  detail::write_file(dir / "summary.json", summary_json(res, cfg));
  for (const auto& m : res.maps) {
    std::ostringstream os;
    sim::write_map(os, m.world);
    detail::write_file(dir / "maps" / (m.name + ".map"), os.str());
  }
  if (!cfg.benchmark.write_traces) return;
  std::filesystem::create_directories(dir / "traces", ec);
  if (ec) throw IoError("cannot create " + (dir / "traces").string() + ": " + ec.message());
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    std::ostringstream os;
    sim::write_trace(os, res.traces[i]);
    detail::write_file(dir / "traces" / (res.rows[i].map + "_" + std::to_string(res.rows[i].trial) + ".trace"),
                       os.str());
  }
}

}  // namespace tnav::bench
