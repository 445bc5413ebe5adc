#include "geoloop/curve.hpp"

#include <algorithm>
#include <cmath>

namespace geoloop {

namespace {

bool equal(const Point& a, const Point& b) { return a.size() == b.size() && a == b; }

std::size_t locate(const std::vector<double>& cum, double s) {
  auto it = std::upper_bound(cum.begin(), cum.end(), s);
  std::size_t j = it == cum.begin() ? 0 : static_cast<std::size_t>(it - cum.begin()) - 1;
  return std::min(j, cum.size() - 2);
}

}  // namespace

PLCurve::PLCurve(ManifoldPtr m, std::vector<Point> pts) : m_(std::move(m)) {
  if (pts.empty()) throw std::invalid_argument("PLCurve: no breakpoints");
  pts_.reserve(pts.size());
  for (Point& p : pts) {
    if (!pts_.empty() && equal(pts_.back(), p)) continue;
    pts_.push_back(std::move(p));
  }
  cum_.resize(pts_.size());
  cum_[0] = 0.0;
  for (std::size_t i = 1; i < pts_.size(); ++i) cum_[i] = cum_[i - 1] + m_->segment_length(pts_[i - 1], pts_[i]);
}

PLCurve::PLCurve(ManifoldPtr m, std::vector<Point> pts, std::vector<double> cum)
    : m_(std::move(m)), pts_(std::move(pts)), cum_(std::move(cum)) {}

PLCurve PLCurve::constant(ManifoldPtr m, const Point& p) { return PLCurve(std::move(m), {p}, {0.0}); }

PLCurve PLCurve::geodesic(ManifoldPtr m, const Point& p, const Point& q, double max_gap) {
  std::vector<Point> pts = m->minimal_geodesic(p, q, max_gap);
  return PLCurve(std::move(m), std::move(pts));
}

bool PLCurve::is_closed() const { return equal(pts_.front(), pts_.back()); }

Point PLCurve::point_at(double s) const {
  if (pts_.size() == 1 || s <= 0.0) return pts_.front();
  if (s >= cum_.back()) return pts_.back();
  const std::size_t j = locate(cum_, s);
  if (s == cum_[j]) return pts_[j];
  if (s == cum_[j + 1]) return pts_[j + 1];
  const double seg = cum_[j + 1] - cum_[j];
  if (seg <= 0.0) return pts_[j];
  return m_->interpolate(pts_[j], pts_[j + 1], (s - cum_[j]) / seg);
}

PLCurve reverse(const PLCurve& c) {
  std::vector<Point> pts(c.pts_.rbegin(), c.pts_.rend());
  const std::size_t n = c.cum_.size();
  std::vector<double> cum(n);
  const double total = c.length();
  for (std::size_t k = 0; k < n; ++k) cum[k] = total - c.cum_[n - 1 - k];
  return PLCurve(c.m_, std::move(pts), std::move(cum));
}

PLCurve concat(const PLCurve& a, const PLCurve& b) {
  if (!equal(a.back(), b.front())) throw EndpointMismatch("concat: curves do not share an endpoint");
  if (a.is_constant()) return b;
  if (b.is_constant()) return a;
  std::vector<Point> pts;
  pts.reserve(a.size() + b.size() - 1);
  pts.insert(pts.end(), a.pts_.begin(), a.pts_.end());
  pts.insert(pts.end(), b.pts_.begin() + 1, b.pts_.end());
  std::vector<double> cum;
  cum.reserve(pts.size());
  cum.insert(cum.end(), a.cum_.begin(), a.cum_.end());
  const double off = a.length();
  for (std::size_t k = 1; k < b.cum_.size(); ++k) cum.push_back(off + b.cum_[k]);
  return PLCurve(a.m_, std::move(pts), std::move(cum));
}

PLCurve concat(std::initializer_list<const PLCurve*> parts) {
  auto it = parts.begin();
  PLCurve out = **it;
  for (++it; it != parts.end(); ++it) out = concat(out, **it);
  return out;
}

PLCurve subcurve(const PLCurve& c, double s0, double s1) {
  const double len = c.length();
  const double tol = 1e-9 * std::max(1.0, len);
  if (s0 < -tol || s1 > len + tol || s0 > s1 + tol) throw RangeError("subcurve: arclength range out of bounds");
  s0 = std::clamp(s0, 0.0, len);
  s1 = std::clamp(s1, s0, len);
  if (s0 == 0.0 && s1 == len) return c;
  if (s1 == s0) return PLCurve::constant(c.m_, c.point_at(s0));
  std::vector<Point> pts{c.point_at(s0)};
  std::vector<double> cum{0.0};
  const std::size_t n = c.pts_.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (c.cum_[k] <= s0) continue;
    if (c.cum_[k] >= s1) break;
    pts.push_back(c.pts_[k]);
    cum.push_back(c.cum_[k] - s0);
  }
  pts.push_back(c.point_at(s1));
  cum.push_back(s1 - s0);
  return PLCurve(c.m_, std::move(pts), std::move(cum));
}

PLCurve refine(const PLCurve& c, double max_gap) {
  if (!(max_gap > 0.0)) throw std::invalid_argument("refine: max_gap must be positive");
  if (c.is_constant()) return c;
  std::vector<Point> pts{c.pts_.front()};
  std::vector<double> cum{0.0};
  bool changed = false;
  for (std::size_t j = 0; j + 1 < c.pts_.size(); ++j) {
    const double seg = c.segment(j);
    const int n = std::max(1, static_cast<int>(std::ceil(seg / max_gap - 1e-12)));
    for (int k = 1; k < n; ++k) {
      const double t = static_cast<double>(k) / n;
      pts.push_back(c.m_->interpolate(c.pts_[j], c.pts_[j + 1], t));
      cum.push_back(c.cum_[j] + t * seg);
      changed = true;
    }
    pts.push_back(c.pts_[j + 1]);
    cum.push_back(c.cum_[j + 1]);
  }
  if (!changed) return c;
  return PLCurve(c.m_, std::move(pts), std::move(cum));
}

double remeasure(const PLCurve& c) {
  double s = 0.0;
  const auto& pts = c.points();
  for (std::size_t i = 1; i < pts.size(); ++i) s += c.manifold().segment_length(pts[i - 1], pts[i]);
  return s;
}

double max_segment(const PLCurve& c) {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) m = std::max(m, c.segment(i));
  return m;
}

bool same_points(const PLCurve& a, const PLCurve& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal(a.points()[i], b.points()[i])) return false;
  return true;
}

LoopAt LoopAt::from(PLCurve c) {
  if (!c.is_closed()) throw EndpointMismatch("loop: first and last breakpoints differ");
  Point p = c.front();
  return {std::move(c), std::move(p)};
}

LoopAt LoopAt::constant(ManifoldPtr m, const Point& p) { return {PLCurve::constant(std::move(m), p), p}; }

}  // namespace geoloop
