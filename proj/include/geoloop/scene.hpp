#pragma once

#include "geoloop/io.hpp"
#include "geoloop/sweepout.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace geoloop {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitHypothesis = 2,
  kExitMismatch = 3,
  kExitCertificate = 4,
};

// Modes: "shorten" (one path or loop), "family" (circle of based loops), "sweepout" (family plus minimax).
struct Scene {
  std::string name;
  std::string mode;
  Json manifold_spec;
  ManifoldPtr manifold;
  Json curve;
  Json family;
  ShorteningParams params;
  double epsilon = 0.01;
  std::optional<double> L;
  std::uint64_t seed = 0;
  SlackPolicy slack;
  std::size_t sample_gaps = 8;
  std::size_t sample_states = 16;
  double spacing = 0.4;
  MinimaxOptions minimax;
};

Scene parse_scene(const Json& j);
Scene load_scene(const std::filesystem::path& p);

// Generators: random_wiggle, winding_line, geodesic, meridian_loop, breakpoints.
PLCurve build_curve(const Scene& s);
// Generators: meridian_sweep, constant.
LoopFamily build_family(const Scene& s);

// Writes report.json, curves/ and CSV traces under out.
int run_scene(const Scene& s, const std::filesystem::path& out, std::ostream& log);

// Re-measures every certificate witness. Witness files are looked up in curves_dir when given.
int verify_report(const std::filesystem::path& report, const std::optional<std::filesystem::path>& curves_dir,
                  std::ostream& log);

// CSV (index, s, tau, length, frozen) of the shortening family of a shorten-mode scene.
void trace_scene(const Scene& s, std::ostream& out);

}  // namespace geoloop
