#pragma once

#include "geoloop/theorem_a.hpp"

#include <functional>

namespace geoloop {

class SyncFailed : public Error {
 public:
  using Error::Error;
};

// Circle of based loops: loops[i] = f(t[i]), t from 0 to 1, loops.front() == loops.back().
struct LoopFamily {
  ManifoldPtr manifold;
  Point basepoint;
  std::vector<double> t;
  std::vector<PLCurve> loops;
  // Exact f(t) when known; node insertion falls back to pointwise geodesic interpolation.
  std::function<PLCurve(double)> generator;

  std::size_t nodes() const { return loops.size(); }
  std::size_t gaps() const { return loops.empty() ? 0 : loops.size() - 1; }
  double max_length() const;
  void validate() const;
};

LoopFamily make_family(const ManifoldPtr& m, std::function<PLCurve(double)> f, std::size_t gaps);

// Vertical track through u: geodesic from a(u |a|) to b(u |b|).
PLCurve vertical_track(const PLCurve& a, const PLCurve& b, double u);
// Max track length over both breakpoint grids and their midpoints.
double vertical_gap(const PLCurve& a, const PLCurve& b);

LoopFamily refine_to_epsilon(LoopFamily f, double epsilon, std::size_t max_nodes = 1u << 15);

// Position of one side: a family frame, or a point inside the moving span that owns `frame`.
struct SideState {
  std::size_t frame = 0;
  double tau = 0.0;
};

struct SyncStep {
  double u = 0.0;
  SideState side[2];
  // Side strictly inside a frozen span, or -1.
  int runner = -1;
};

// Common parametrization of two families by arclength fraction u. Moving spans advance together;
// a frozen span runs alone. Ties go to side 0 unless b_first.
std::vector<SyncStep> synchronize(const ShorteningFamily& A, const ShorteningFamily& B, bool b_first = false);

PLCurve sync_gamma(const ShorteningFamily& F, const SideState& s);
double sync_gamma_length(const ShorteningFamily& F, const SideState& s);

// Frames gamma^A * v * rev(gamma^B) along the sync, reversed: from beta_A * rev(beta_B) to the constant loop.
LengthHomotopy contract_adjacent(const ShorteningFamily& A, const ShorteningFamily& B, const std::vector<SyncStep>& sync,
                                 double bound, double slack);

struct FamilyOptions {
  double epsilon = 0.01;
  std::size_t max_nodes = 1u << 15;
  // Gaps with materialized deformation frames besides the worst one.
  std::size_t sample_gaps = 8;
  std::size_t sample_states = 16;
  unsigned threads = 0;
  SlackPolicy slack;
  // Declared bound on input lengths; the family maximum when unset.
  std::optional<double> L;
};

struct GapSummary {
  std::size_t gap = 0;
  std::size_t states = 0;
  double max_contraction = 0.0;
  double max_contraction_measured = 0.0;
  double max_tilde_measured = 0.0;
  std::size_t tilde_frames = 0;
  double max_deformation = 0.0;
  std::size_t argmax_deformation = 0;
  double max_short_side = 0.0;
  double max_vertical = 0.0;
  bool doubled_b = true;
  bool based = true;
};

struct DeformationSample {
  std::size_t gap = 0;
  std::size_t state = 0;
  double closed_form = 0.0;
  double measured = 0.0;
  std::size_t frames = 0;
};

struct FamilyResult {
  LoopFamily family;
  ShorteningParams params;
  double epsilon = 0.0;
  double L = 0.0;
  std::vector<PLCurve> beta;
  std::vector<std::size_t> steps;
  std::vector<GapSummary> gaps;
  std::vector<DeformationSample> samples;
  double max_vertical = 0.0;
  double max_short_side = 0.0;
  double max_deformation = 0.0;
  bool disjoint = true;
  bool based = true;
  bool start_matches = true;
  bool end_matches = true;
  std::vector<BoundCertificate> certs;

  bool pass() const;
};

// Full pipeline: per-node shortening, pairwise contraction, the shortened family and its deformation.
FamilyResult shorten_family(const LoopFamily& f, const ShorteningParams& params, const FamilyOptions& opt = {});

// Frames of the shortened family across one gap (beta_gap -> beta_gap+1).
std::vector<PLCurve> shortened_gap_frames(const LoopFamily& f, const ShorteningParams& params, std::size_t gap,
                                          double slack);

// Contraction loops gamma^A * v * rev(gamma^B) at every sync state of one gap.
std::vector<PLCurve> contraction_frames(const LoopFamily& f, const ShorteningParams& params, std::size_t gap);

// Deformation at sync state `state` across one gap: partial shortening of node gap -> of node gap+1.
std::vector<PLCurve> deformation_frames(const LoopFamily& f, const ShorteningParams& params, std::size_t gap,
                                        std::size_t state, double slack);

unsigned worker_count(unsigned requested);

}  // namespace geoloop
