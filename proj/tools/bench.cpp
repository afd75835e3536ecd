// bench: benchmark, timing and map utilities for the tentacle navigator.

#include "tnav/bench/benchmark.hpp"
#include "tnav/bench/config.hpp"
#include "tnav/bench/timing.hpp"
#include "tnav/sim/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kConfig = 2;
constexpr int kIo = 3;

const char* kOutDirEnv = "TNAV_OUT_DIR";

std::filesystem::path output_dir(const tnav::bench::Config& cfg, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return cfg.benchmark.output_dir;
}

tnav::bench::Config load(const std::string& path, std::optional<std::uint64_t> seed) {
  auto cfg = tnav::bench::parse_config(path);
  if (seed) cfg.benchmark.seed = *seed;
  return cfg;
}

int cmd_run(const std::string& config, std::optional<std::uint64_t> seed, const std::string& out,
            std::optional<int> jobs, bool quiet) {
  auto cfg = load(config, seed);
  if (jobs) {
    if (*jobs < 1) throw tnav::ConfigError("--jobs must be >= 1");
    cfg.benchmark.jobs = *jobs;
  }
  const auto dir = output_dir(cfg, out);
  auto progress = [&](const tnav::bench::TrialRow& r) {
    if (quiet) return;
    std::fprintf(stderr, "%s trial %d: %s%s%s\n", r.map.c_str(), r.trial,
                 std::string(tnav::sim::to_string(r.outcome)).c_str(), r.error.empty() ? "" : " error: ",
                 r.error.c_str());
  };
  const auto res = tnav::bench::run_benchmark(cfg, progress);
  tnav::bench::emit_results(res, cfg, dir);
  int trials = 0;
  int ok = 0;
  for (const auto& a : res.aggregates) {
    trials += a.trials;
    ok += a.successes;
    std::printf("%-12s %d/%d  duration %.2f +- %.2f s  path %.2f +- %.2f m\n", a.map.c_str(), a.successes,
                a.trials, a.duration_mean, a.duration_std, a.path_length_mean, a.path_length_std);
  }
  std::printf("total %d/%d successful, results in %s\n", ok, trials, dir.string().c_str());
  return kOk;
}

int cmd_timing(const std::string& config, std::optional<std::uint64_t> seed, const std::string& out) {
  const auto cfg = load(config, seed);
  std::vector<tnav::bench::TimingReport> reps;
  for (const auto& tc : cfg.timing.cases) {
    reps.push_back(tnav::bench::run_timing_case(cfg, tc));
    const auto& r = reps.back();
    std::printf(
        "d_v=%.3f n_v=%d N_t=%zu: init %.4f s, generation %.3f s, cycle %.3f ms "
        "(map %.3f, occ+heur %.3f, select %.3f, next %.3f) = %.1f Hz\n",
        r.tc.d_v, r.tc.n_v, r.tentacle_count, r.array_init_s, r.generation_s, r.cycle_ms(), r.map_update_ms,
        r.occupancy_heuristics_ms, r.selection_ms, r.next_pose_ms, r.rate_hz());
  }
  const auto dir = output_dir(cfg, out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw tnav::bench::IoError("cannot create " + dir.string() + ": " + ec.message());
  std::ofstream f(dir / "timing.csv", std::ios::binary);
  if (!(f << tnav::bench::timing_csv(reps))) throw tnav::bench::IoError("cannot write " + (dir / "timing.csv").string());
  return kOk;
}

int cmd_map_gen(const std::string& type, std::uint64_t seed, const std::string& out, double area,
                double density, int count) {
  tnav::sim::WorldMap w;
  if (type == "forest") {
    w = tnav::sim::generate_forest_map(area, density, seed);
  } else if (type == "cylinder") {
    tnav::sim::CylinderMapOptions opt;
    opt.count = count;
    w = tnav::sim::generate_cylinder_map(seed, opt);
  } else if (type == "empty") {
    w.seed = seed;
    w.bounds = {-10.0, -10.0, 10.0, 10.0};
  } else {
    std::cerr << "unknown map type '" << type << "' (forest, cylinder, empty)\n";
    return kUsage;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw tnav::bench::IoError("cannot write " + out);
  tnav::sim::write_map(f, w);
  if (!f) throw tnav::bench::IoError("write failed for " + out);
  std::printf("%zu obstacles written to %s\n", w.obstacles.size(), out.c_str());
  return kOk;
}

int cmd_replay(const std::string& trace_path, const std::string& map_path, const std::string& config) {
  tnav::sim::RobotModel robot = config.empty() ? tnav::bench::default_parameters().robot
                                               : tnav::bench::parse_config(config).params.robot;
  std::ifstream tf(trace_path);
  if (!tf) throw tnav::bench::IoError("cannot read " + trace_path);
  std::ifstream mf(map_path);
  if (!mf) throw tnav::bench::IoError("cannot read " + map_path);
  const auto trace = tnav::sim::read_trace(tf);
  const auto world = tnav::sim::read_map(mf);
  const auto rep = tnav::sim::replay(trace, world, robot);
  std::printf("%zu records, path %.3f m\n", rep.records, rep.path_length);
  if (rep.first_collision) {
    const auto& r = trace[*rep.first_collision];
    std::printf("collision at record %zu (t=%.3f, x=%.3f, y=%.3f)\n", *rep.first_collision, r.t, r.pose.p.x(),
                r.pose.p.y());
  } else {
    std::printf("no collision\n");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tentacle navigation benchmark"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::string out;
  std::string config;

  auto* run = app.add_subcommand("run", "Run the benchmark described by a config");
  std::optional<int> jobs;
  bool quiet = false;
  run->add_option("config", config, "JSON config file")->required();
  run->add_option("--seed", seed, "Global seed, overrides the config");
  run->add_option("-o,--out", out, std::string("Output directory (else $") + kOutDirEnv + ", else config)");
  run->add_option("-j,--jobs", jobs, "Parallel trials");
  run->add_flag("-q,--quiet", quiet, "No per-trial progress");

  auto* timing = app.add_subcommand("timing", "Measure initialization and per-cycle phase times");
  timing->add_option("config", config, "JSON config file")->required();
  timing->add_option("--seed", seed, "Global seed, overrides the config");
  timing->add_option("-o,--out", out, "Output directory");

  auto* map = app.add_subcommand("map", "Map utilities");
  map->require_subcommand(1);
  auto* gen = map->add_subcommand("gen", "Generate a seeded map file");
  std::string type;
  std::uint64_t map_seed = 0;
  std::string map_out;
  double area = 100.0;
  double density = 0.2;
  int count = 30;
  gen->add_option("type", type, "forest, cylinder or empty")->required();
  gen->add_option("seed", map_seed, "RNG seed")->required();
  gen->add_option("out", map_out, "Output map file")->required();
  gen->add_option("--area", area, "Forest area, m^2")->check(CLI::PositiveNumber);
  gen->add_option("--density", density, "Forest density, trees/m^2")->check(CLI::NonNegativeNumber);
  gen->add_option("--count", count, "Cylinder count")->check(CLI::NonNegativeNumber);

  auto* rep = app.add_subcommand("replay", "Re-check a trace against a map for collisions");
  std::string trace_path;
  std::string map_path;
  rep->add_option("trace", trace_path, "Trace file")->required();
  rep->add_option("-m,--map", map_path, "Map file")->required();
  rep->add_option("-c,--config", config, "Config with the robot model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (run->parsed()) return cmd_run(config, seed, out, jobs, quiet);
    if (timing->parsed()) return cmd_timing(config, seed, out);
    if (gen->parsed()) return cmd_map_gen(type, map_seed, map_out, area, density, count);
    if (rep->parsed()) return cmd_replay(trace_path, map_path, config);
  } catch (const tnav::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const tnav::GenerationError& e) {
    std::cerr << "map generation failed: " << e.what() << "\n";
    return kConfig;
  } catch (const tnav::bench::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kIo;
  } catch (const tnav::bench::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const tnav::sim::FormatError& e) {
    std::cerr << "bad input file: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}
