#pragma once

#include "geoloop/curve.hpp"

#include <optional>
#include <vector>

namespace geoloop {

class IterationBudgetExceeded : public Error {
 public:
  using Error::Error;
};

struct BirkhoffOptions {
  double tol = 1e-6;
  std::size_t max_sweeps = 100000;
  double max_gap = 0.08;
  // A breakpoint is dropped when its neighbours are this close.
  double coarsen_gap = 0.06;
  // Displacement budget between recorded stages.
  double record_spacing = 0.05;
  bool record = true;
  // Normal-mode perturbations tried when a non-constant loop stalls.
  std::optional<bool> escape;
  double escape_amplitude = 1e-2;
  int max_escapes = 64;
};

struct ShorteningTrace {
  std::vector<PLCurve> stages;
  PLCurve limit;
  std::optional<Point> basepoint;
  bool converged = false;
  std::size_t iterations = 0;
  int escapes = 0;

  std::vector<double> stage_lengths() const;
};

// Alternating odd/even midpoint sweeps; the basepoint never moves.
ShorteningTrace shorten_based_loop(const LoopAt& loop, const BirkhoffOptions& opt = {});
ShorteningTrace shorten_free_loop(const PLCurve& loop, const BirkhoffOptions& opt = {});

// Max distance of a breakpoint from the proportional point on the geodesic through its neighbours.
double geodesic_residual(const PLCurve& c, bool closed);

// Smallest length change over random single-breakpoint moves of the given size.
double probe_local_minimality(const PLCurve& limit, bool based, int samples = 50, double magnitude = 1e-3,
                              std::uint64_t seed = 1);

// Length change caused by one more sweep.
double sweep_delta(const PLCurve& limit, bool based);

}  // namespace geoloop
