#include "geoloop/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace geoloop {

namespace {

void push_frame(std::vector<PLCurve>& out, PLCurve c) {
  if (!out.empty() && same_points(out.back(), c)) return;
  out.push_back(std::move(c));
}

void check_bound(const LengthHomotopy& h, const char* what) {
  const double m = h.max_length();
  if (m > h.certified_bound + h.slack) {
    std::ostringstream os;
    os << what << ": frame length " << m << " exceeds bound " << h.certified_bound << " + " << h.slack;
    throw BoundViolation(os.str());
  }
}

}  // namespace

double LengthHomotopy::max_length() const {
  double m = 0.0;
  for (const PLCurve& f : frames) m = std::max(m, f.length());
  return m;
}

double LengthHomotopy::remeasured_max() const {
  double m = 0.0;
  for (const PLCurve& f : frames) m = std::max(m, remeasure(f));
  return m;
}

void assert_bound(const LengthHomotopy& h, const char* what) {
  const double m = h.remeasured_max();
  if (m > h.certified_bound + h.slack) {
    std::ostringstream os;
    os << what << ": re-measured length " << m << " exceeds bound " << h.certified_bound << " + " << h.slack;
    throw BoundViolation(os.str());
  }
}

LengthHomotopy constant_homotopy(const PLCurve& c) {
  LengthHomotopy h;
  h.frames = {c};
  h.start_point = c.front();
  h.end_point = c.back();
  h.certified_bound = c.length();
  return h;
}

LengthHomotopy from_trace(const ShorteningTrace& t) {
  LengthHomotopy h;
  for (const PLCurve& s : t.stages) push_frame(h.frames, s);
  push_frame(h.frames, t.limit);
  h.start_point = t.stages.front().front();
  if (t.basepoint) h.end_point = *t.basepoint;
  h.certified_bound = t.stages.front().length();
  return h;
}

LengthHomotopy chain(const std::vector<LengthHomotopy>& parts) {
  if (parts.empty()) throw std::invalid_argument("chain: no parts");
  LengthHomotopy out;
  out.start_point = parts.front().start_point;
  bool fixed = true;
  for (const LengthHomotopy& p : parts) {
    if (p.start_point != out.start_point) throw EndpointMismatch("chain: start points differ");
    if (!out.frames.empty() && !same_points(out.frames.back(), p.frames.front()))
      throw EndpointMismatch("chain: parts do not connect");
    const bool track = !p.end_track.empty() || !out.end_track.empty();
    for (std::size_t i = 0; i < p.frames.size(); ++i) {
      if (i == 0 && !out.frames.empty()) continue;
      out.frames.push_back(p.frames[i]);
      if (track) out.end_track.push_back(p.frames[i].back());
    }
    if (!p.end_point || (parts.front().end_point && *p.end_point != *parts.front().end_point)) fixed = false;
    out.certified_bound = std::max(out.certified_bound, p.certified_bound);
    out.slack = std::max(out.slack, p.slack);
  }
  if (fixed) out.end_point = parts.front().end_point;
  if (!out.end_track.empty() && out.end_track.size() != out.frames.size()) {
    out.end_track.clear();
    for (const PLCurve& f : out.frames) out.end_track.push_back(f.back());
  }
  return out;
}

LengthHomotopy reversed(const LengthHomotopy& h) {
  LengthHomotopy r = h;
  std::reverse(r.frames.begin(), r.frames.end());
  std::reverse(r.end_track.begin(), r.end_track.end());
  return r;
}

std::vector<PLCurve> doubling_frames(const PLCurve& c, const PLCurve& tail, double step) {
  if (c.back() != tail.back()) throw EndpointMismatch("doubling: curves do not share an endpoint");
  std::vector<PLCurve> out{c};
  const double len = tail.length();
  if (len == 0.0) return out;
  const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
  for (int k = 1; k <= n; ++k) {
    const double x = len * k / n;
    const PLCurve d = k == n ? tail : subcurve(tail, len - x, len);
    const PLCurve r = reverse(d);
    out.push_back(concat({&c, &r, &d}));
  }
  return out;
}

LengthHomotopy lemma_path_homotopy(const PLCurve& g1, const PLCurve& g2, const LengthHomotopy& H, double slack) {
  if (g1.front() != g2.front() || g1.back() != g2.back())
    throw EndpointMismatch("lemma: curves must share both endpoints");
  const PLCurve loop = concat(g1, reverse(g2));
  if (!same_points(H.frames.front(), loop)) throw EndpointMismatch("lemma: homotopy must start at g1 * rev(g2)");
  LengthHomotopy out;
  out.start_point = g1.front();
  out.end_point = g1.back();
  out.certified_bound = H.certified_bound + g2.length();
  out.slack = slack;
  for (PLCurve& f : doubling_frames(g1, g2)) push_frame(out.frames, std::move(f));
  for (const PLCurve& h : H.frames) {
    if (h.front() != out.start_point || h.back() != out.start_point)
      throw EndpointMismatch("lemma: homotopy frames must be loops at p");
    push_frame(out.frames, concat(h, g2));
  }
  check_bound(out, "lemma_path_homotopy");
  return out;
}

LengthHomotopy lemma_moving_endpoint(const PLCurve& g1, const PLCurve& v, const PLCurve& g2, const LengthHomotopy& H,
                                     double slack) {
  if (g1.back() != v.front() || v.back() != g2.back())
    throw EndpointMismatch("lemma: track must join the two endpoints");
  LengthHomotopy out;
  out.start_point = g1.front();
  out.certified_bound = H.certified_bound + g2.length();
  out.slack = slack;
  const double len = v.length();
  const int n = len == 0.0 ? 0 : std::max(1, static_cast<int>(std::ceil(len / kFrameStep)));
  out.frames.push_back(g1);
  for (int k = 1; k <= n; ++k) out.frames.push_back(concat(g1, k == n ? v : subcurve(v, 0, len * k / n)));
  const LengthHomotopy fixed = lemma_path_homotopy(concat(g1, v), g2, H, slack);
  for (std::size_t i = 1; i < fixed.frames.size(); ++i) out.frames.push_back(fixed.frames[i]);
  for (const PLCurve& f : out.frames) out.end_track.push_back(f.back());
  check_bound(out, "lemma_moving_endpoint");
  return out;
}

std::vector<LengthHomotopy> lemma_sphere_contraction(const std::vector<PLCurve>& f, std::size_t x0,
                                                     const std::vector<LengthHomotopy>& Fh, double slack) {
  if (f.size() != Fh.size() || x0 >= f.size()) throw std::invalid_argument("lemma_sphere_contraction: bad sizes");
  double L = 0.0;
  for (const PLCurve& c : f) L = std::max(L, c.length());
  const double l = f[x0].length();
  std::vector<LengthHomotopy> out;
  out.reserve(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (Fh[x].certified_bound > L + l + slack)
      throw BoundViolation("lemma_sphere_contraction: contraction exceeds L + l");
    if (!Fh[x].frames.back().is_constant()) throw EndpointMismatch("lemma_sphere_contraction: F must end constant");
    LengthHomotopy h = lemma_path_homotopy(f[x], f[x0], Fh[x], slack);
    h.certified_bound = L + 2.0 * l;
    check_bound(h, "lemma_sphere_contraction");
    out.push_back(std::move(h));
  }
  return out;
}

LengthHomotopy radial_contraction(const LoopAt& loop, int frames) {
  const ManifoldPtr& m = loop.curve.manifold_ptr();
  const Point& p = loop.basepoint;
  std::vector<PLCurve> rays;
  double reach = 0.0;
  for (const Point& x : loop.curve.points()) {
    rays.push_back(PLCurve::geodesic(m, x, p));
    reach = std::max(reach, rays.back().length());
  }
  const int n = std::max(frames, static_cast<int>(std::ceil(reach / kFrameStep)));
  LengthHomotopy h;
  h.start_point = p;
  h.end_point = p;
  for (int k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) / n;
    if (k == n) {
      h.frames.push_back(PLCurve::constant(m, p));
      break;
    }
    std::vector<Point> pts;
    pts.reserve(rays.size());
    for (const PLCurve& r : rays) pts.push_back(r.point_at(t * r.length()));
    pts.front() = p;
    pts.back() = p;
    push_frame(h.frames, k == 0 ? loop.curve : PLCurve(m, std::move(pts)));
  }
  h.certified_bound = h.max_length();
  return h;
}

double frame_displacement(const PLCurve& a, const PLCurve& b, int samples) {
  const Manifold& M = a.manifold();
  double d = 0.0;
  for (int k = 0; k <= samples; ++k) {
    const double u = static_cast<double>(k) / samples;
    d = std::max(d, M.distance(a.point_at(u * a.length()), b.point_at(u * b.length())));
  }
  return d;
}

}  // namespace geoloop
