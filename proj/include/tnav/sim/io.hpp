#pragma once

#include "tnav/sim/scenario.hpp"
#include "tnav/sim/world.hpp"

#include <cinttypes>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tnav::sim {

/// Malformed map or trace text.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Map file:
//   # comment
//   bounds <xmin> <ymin> <xmax> <ymax>
//   seed <n>
//   obstacle <x> <y> <radius> <height>     (one per cylinder)
inline void write_map(std::ostream& os, const WorldMap& w) {
  char line[160];
  os << "# tnav world map\n";
  std::snprintf(line, sizeof line, "bounds %.6f %.6f %.6f %.6f\n", w.bounds.xmin, w.bounds.ymin,
                w.bounds.xmax, w.bounds.ymax);
  os << line;
  std::snprintf(line, sizeof line, "seed %" PRIu64 "\n", w.seed);
  os << line;
  for (const auto& c : w.obstacles) {
    std::snprintf(line, sizeof line, "obstacle %.6f %.6f %.6f %.6f\n", c.x, c.y, c.radius, c.height);
    os << line;
  }
}

inline WorldMap read_map(std::istream& is) {
  WorldMap w;
  bool have_bounds = false;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag) || tag[0] == '#') continue;
    bool ok = true;
    if (tag == "bounds") {
      ok = static_cast<bool>(ss >> w.bounds.xmin >> w.bounds.ymin >> w.bounds.xmax >> w.bounds.ymax);
      have_bounds = ok;
    } else if (tag == "seed") {
      ok = static_cast<bool>(ss >> w.seed);
    } else if (tag == "obstacle") {
      Cylinder c;
      ok = static_cast<bool>(ss >> c.x >> c.y >> c.radius >> c.height);
      if (ok) w.obstacles.push_back(c);
    } else {
      throw FormatError("map line " + std::to_string(lineno) + ": unknown record '" + tag + "'");
    }
    if (!ok) throw FormatError("map line " + std::to_string(lineno) + ": malformed '" + tag + "'");
  }
  if (!have_bounds) throw FormatError("map: missing bounds record");
  return w;
}

inline std::vector<TraceRecord> read_trace(std::istream& is) {
  std::vector<TraceRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    TraceRecord r;
    double qx, qy, qz, qw;
    if (!(ss >> r.t >> r.pose.p.x() >> r.pose.p.y() >> r.pose.p.z() >> qx >> qy >> qz >> qw >> r.best >>
          r.mu_t))
      throw FormatError("trace line " + std::to_string(lineno) + ": expected 10 fields");
    r.pose.q = Quat(qw, qx, qy, qz).normalized();
    out.push_back(r);
  }
  return out;
}

struct ReplayReport {
  std::size_t records = 0;
  std::optional<std::size_t> first_collision;  // index into the trace
  double path_length = 0.0;
};

/// Re-checks every pose of a trace against a map.
inline ReplayReport replay(const std::vector<TraceRecord>& trace, const WorldMap& world,
                           const RobotModel& robot) {
  ReplayReport rep;
  rep.records = trace.size();
  rep.path_length = path_length(trace);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (check_collision(world, trace[i].pose, robot)) {
      rep.first_collision = i;
      break;
    }
  }
  return rep;
}

}  // namespace tnav::sim
