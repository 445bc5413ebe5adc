#pragma once

#include "geoloop/manifold.hpp"

#include <vector>

namespace geoloop {

class EndpointMismatch : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

// Piecewise-geodesic curve queried by arclength.
class PLCurve {
 public:
  PLCurve() = default;
  PLCurve(ManifoldPtr m, std::vector<Point> pts);

  static PLCurve constant(ManifoldPtr m, const Point& p);
  static PLCurve geodesic(ManifoldPtr m, const Point& p, const Point& q, double max_gap = kDefaultGap);

  const ManifoldPtr& manifold_ptr() const { return m_; }
  const Manifold& manifold() const { return *m_; }
  const std::vector<Point>& points() const { return pts_; }
  const std::vector<double>& cumulative() const { return cum_; }
  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }
  const Point& front() const { return pts_.front(); }
  const Point& back() const { return pts_.back(); }
  double length() const { return cum_.empty() ? 0.0 : cum_.back(); }
  double segment(std::size_t i) const { return cum_[i + 1] - cum_[i]; }
  bool is_constant() const { return pts_.size() == 1; }
  bool is_closed() const;

  Point point_at(double s) const;

 private:
  friend PLCurve reverse(const PLCurve&);
  friend PLCurve concat(const PLCurve&, const PLCurve&);
  friend PLCurve subcurve(const PLCurve&, double, double);
  friend PLCurve refine(const PLCurve&, double);
  PLCurve(ManifoldPtr m, std::vector<Point> pts, std::vector<double> cum);

  ManifoldPtr m_;
  std::vector<Point> pts_;
  std::vector<double> cum_;
};

PLCurve reverse(const PLCurve& c);
PLCurve concat(const PLCurve& a, const PLCurve& b);
PLCurve concat(std::initializer_list<const PLCurve*> parts);
PLCurve subcurve(const PLCurve& c, double s0, double s1);
PLCurve refine(const PLCurve& c, double max_gap);

// Independent re-summation of segment lengths.
double remeasure(const PLCurve& c);
double max_segment(const PLCurve& c);
bool same_points(const PLCurve& a, const PLCurve& b);

struct LoopAt {
  PLCurve curve;
  Point basepoint;

  static LoopAt from(PLCurve c);
  static LoopAt constant(ManifoldPtr m, const Point& p);
  double length() const { return curve.length(); }
};

}  // namespace geoloop
