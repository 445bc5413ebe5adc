#pragma once

#include "geoloop/birkhoff.hpp"
#include "geoloop/curve.hpp"

#include <optional>
#include <vector>

namespace geoloop {

class BoundViolation : public Error {
 public:
  using Error::Error;
};

// Discrete one-parameter family of curves from a common start point.
struct LengthHomotopy {
  std::vector<PLCurve> frames;
  Point start_point;
  std::optional<Point> end_point;
  // One entry per frame when the right endpoint moves.
  std::vector<Point> end_track;
  double certified_bound = 0.0;
  double slack = 0.0;

  double max_length() const;
  double remeasured_max() const;
  bool within_bound() const { return max_length() <= certified_bound + slack; }
  const PLCurve& front() const { return frames.front(); }
  const PLCurve& back() const { return frames.back(); }
};

// Frame spacing used by every constructor here.
inline constexpr double kFrameStep = 0.5 * kInjectivityMargin;

LengthHomotopy constant_homotopy(const PLCurve& c);

// Birkhoff stages as a based-loop homotopy; bound = first stage length.
LengthHomotopy from_trace(const ShorteningTrace& t);

// Concatenation; the certified bound is the max of the parts.
LengthHomotopy chain(const std::vector<LengthHomotopy>& parts);

LengthHomotopy reversed(const LengthHomotopy& h);

// Frames c * rev(tail)|[0,x] * tail|[len-x,len] for x up to |tail|; c must end where tail ends.
std::vector<PLCurve> doubling_frames(const PLCurve& c, const PLCurve& tail, double step = kFrameStep);

// g1, g2 : p -> q.  H contracts g1 * rev(g2) to a loop a1 through loops of length <= H.certified_bound.
// Result: g1 -> a1 * g2 with bound H.certified_bound + |g2|.
LengthHomotopy lemma_path_homotopy(const PLCurve& g1, const PLCurve& g2, const LengthHomotopy& H, double slack);

// Same, with the right endpoint first carried along v (from g1's end to g2's end).
LengthHomotopy lemma_moving_endpoint(const PLCurve& g1, const PLCurve& v, const PLCurve& g2, const LengthHomotopy& H,
                                     double slack);

// Circle-indexed version: f[x] : p -> q, Fh[x] contracts f[x] * rev(f[x0]).
// Each output runs f[x] -> f[x0]; bound L + 2l with L = max |f|, l = |f[x0]|.
std::vector<LengthHomotopy> lemma_sphere_contraction(const std::vector<PLCurve>& f, std::size_t x0,
                                                     const std::vector<LengthHomotopy>& Fh, double slack);

// Loop contraction by pointwise geodesic interpolation towards the basepoint.
LengthHomotopy radial_contraction(const LoopAt& loop, int frames = 32);

// Max distance between points at equal arclength fractions.
double frame_displacement(const PLCurve& a, const PLCurve& b, int samples = 64);

// Throws BoundViolation unless every frame re-measures within the bound.
void assert_bound(const LengthHomotopy& h, const char* what);

}  // namespace geoloop
