#pragma once

#include "geoloop/theorem_b.hpp"

namespace geoloop {

struct MinimaxOptions {
  // Breakpoints per member after resampling.
  std::size_t points = 64;
  // Stagnation: relative max decrease below tol over `window` sweeps.
  double tol = 1e-6;
  std::size_t window = 100;
  std::size_t max_sweeps = 400000;
  // Members shorter than this fraction of the current max are left alone.
  double active_fraction = 0.5;
  // A member has collapsed once shorter than this fraction of the initial max.
  double collapse_fraction = 0.1;
  std::size_t collapse_budget = 200000;
  // Neighbours whose collapse points are farther apart than this are bisected.
  double split_distance = 0.5;
  int bisections = 44;
  // The family counts as degenerate below this max length.
  double degenerate_length = 1e-3;
  int q = 1;
  SlackPolicy slack;
};

struct MinimaxResult {
  PLCurve critical_loop;
  double minimax_length = 0.0;
  double geodesic_residual = 0.0;
  std::vector<double> stage_max;
  double initial_max = 0.0;
  std::size_t sweeps = 0;
  std::size_t members = 0;
  std::size_t brackets = 0;
  std::size_t refined = 0;
  bool stagnated = false;
  bool degenerate = false;
  bool monotone = true;
  BoundCertificate bound;
};

// Simultaneous free-loop sweeps over a closed family of closed curves, max tracked per sweep.
// Before sweeping, neighbours that collapse to distant points are bisected so the family keeps
// members close to the mountain pass.
MinimaxResult minimax_geodesic(const std::vector<PLCurve>& family, const MinimaxOptions& opt = {});

// Members of the shortened family, thinned so that neighbours are at least `spacing` apart.
std::vector<PLCurve> sweepout_members(const LoopFamily& f, const ShorteningParams& params, double spacing,
                                      double slack);

// ((4k + 2)m + (2k - 3))a
double bound_formula(double k, int m, double a);

enum class CountKind { loops, paths };
// 16 pi (n - 1) k for loops, pi (16 k (n - 1) + 1) for paths.
double loop_count_bound(int n, int k, CountKind kind);

// The diameter-based choice k = pi / (2d) + 1 and its successive upper bounds.
struct RemarkChain {
  double k = 0.0;
  double formula = 0.0;
  double expanded = 0.0;
  double relaxed = 0.0;
  double coarse = 0.0;
};
RemarkChain remark_chain(int q, double d);

}  // namespace geoloop
