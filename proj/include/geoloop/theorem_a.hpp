#pragma once

#include "geoloop/birkhoff.hpp"
#include "geoloop/certificates.hpp"
#include "geoloop/homotopy.hpp"

#include <functional>

namespace geoloop {

class HypothesisViolated : public Error {
 public:
  HypothesisViolated(const std::string& what, PLCurve loop, double loop_length)
      : Error(what), loop(std::move(loop)), loop_length(loop_length) {}
  PLCurve loop;
  double loop_length;
};

struct ShorteningParams {
  double l = 0.0;
  double a = 0.0;
  double delta = 0.0;
  // Cut step is delta / refine.
  int refine = 1;
  BirkhoffOptions birkhoff;

  void validate() const;
  double step() const { return delta / refine; }
  Params symbols(double L) const;
};

// gamma = base * alpha|[t0, tau], tau in [t0, t1].
struct MovingSpan {
  PLCurve base;
  double t0 = 0.0;
  double t1 = 0.0;
  int segments = 1;
};

// Endpoint held at alpha(t): doubling frames head * rev(e)|[0,x] * e|[|e|-x,|e|], then stage_j * e.
struct FrozenSpan {
  double t = 0.0;
  PLCurve head;
  PLCurve edge;
  std::vector<PLCurve> stages;
  std::vector<double> xs;
  double head_length = 0.0;
  bool trivial = false;
};

struct FamilySpan {
  bool frozen = false;
  MovingSpan moving;
  FrozenSpan fixed;
  std::size_t first = 0;
  std::size_t frames = 0;
};

class ShorteningFamily {
 public:
  ShorteningFamily() = default;
  ShorteningFamily(PLCurve alpha, std::vector<FamilySpan> spans);

  const PLCurve& alpha() const { return alpha_; }
  const std::vector<FamilySpan>& spans() const { return spans_; }
  std::size_t frame_count() const { return count_; }

  PLCurve frame(std::size_t i) const;
  double frame_length(std::size_t i) const;
  double tau(std::size_t i) const;
  double s(std::size_t i) const { return count_ <= 1 ? 0.0 : static_cast<double>(i) / (count_ - 1); }
  bool in_frozen(std::size_t i) const;
  std::size_t span_of(std::size_t i) const;

  // P in alpha arclength, Q in s.
  std::vector<double> P() const;
  std::vector<double> Q() const;
  const PLCurve& final_curve() const { return final_; }

 private:
  PLCurve alpha_;
  std::vector<FamilySpan> spans_;
  std::size_t count_ = 0;
  PLCurve final_;
};

struct SplicedLoop {
  double t = 0.0;
  double loop_length = 0.0;
  double limit_length = 0.0;
  bool converged = false;
};

struct ShorteningResult {
  PLCurve final;
  ShorteningFamily family;
  std::vector<SplicedLoop> loops;
  std::size_t steps = 0;
  double predicted_steps = 0.0;
  bool vacuous = false;
};

ShorteningResult shorten_curve(const PLCurve& alpha, const ShorteningParams& params);

// gamma_s followed by the unused tail of alpha.
PLCurve partial_shortening(const ShorteningFamily& fam, double s);
PLCurve partial_frame(const ShorteningFamily& fam, std::size_t i);

// The homotopy alpha -> final through partial shortenings.
LengthHomotopy family_homotopy(const ShorteningFamily& fam, double slack = 0.0);

struct FamilyCheck {
  double max_gamma = 0.0;
  double max_homotopy = 0.0;
  double max_even_point = 0.0;
  double final_length = 0.0;
  bool tau_monotone = true;
  bool frozen_endpoints = true;
  bool moving_spans = true;
  bool last_is_final = true;
  bool partitions = true;
  bool loops_ok = true;
  bool even_points = true;
  std::vector<BoundCertificate> certs;

  bool pass() const;
};

// Independent pass over every stored frame.
FamilyCheck check_family(const ShorteningResult& r, const ShorteningParams& params, double slack);

}  // namespace geoloop
