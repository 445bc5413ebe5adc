#include "geoloop/generators.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace geoloop {

namespace {

constexpr double pi = std::numbers::pi;

std::array<double, 3> axes_of(const Manifold& m) {
  if (const auto* s = dynamic_cast<const RoundSphere*>(&m)) {
    if (s->dim() != 2) throw ConfigError("meridian family needs a 2-sphere");
    return {s->radius(), s->radius(), s->radius()};
  }
  if (const auto* e = dynamic_cast<const Ellipsoid*>(&m)) {
    const auto& ax = e->semi_axes();
    if (ax.size() != 3 || ax[0] != ax[1]) throw ConfigError("meridian family needs an ellipsoid of revolution");
    return {ax[0], ax[1], ax[2]};
  }
  throw ConfigError("meridian family needs a sphere or ellipsoid");
}

}  // namespace

Point north_pole(const ManifoldPtr& m) {
  const auto ax = axes_of(*m);
  return make_point({0.0, 0.0, ax[2]});
}

PLCurve meridian_loop(const ManifoldPtr& m, double t, double max_gap) {
  const auto ax = axes_of(*m);
  const double longest = std::max({ax[0], ax[1], ax[2]});
  const int n = std::max(2, static_cast<int>(std::ceil(pi * longest / max_gap)));
  auto X = [&](double th, double ph) {
    return m->canonical(
        make_point({ax[0] * std::sin(th) * std::cos(ph), ax[1] * std::sin(th) * std::sin(ph), ax[2] * std::cos(th)}));
  };
  const double phi = 2.0 * pi * t;
  std::vector<Point> pts;
  pts.push_back(make_point({0.0, 0.0, ax[2]}));
  for (int k = 1; k < n; ++k) pts.push_back(X(pi * k / n, 0.0));
  pts.push_back(make_point({0.0, 0.0, -ax[2]}));
  for (int k = n - 1; k >= 1; --k) pts.push_back(X(pi * k / n, phi));
  pts.push_back(pts.front());
  return PLCurve(m, std::move(pts));
}

PLCurve random_wiggle(const ManifoldPtr& m, const Point& p, const Point& q, double target_length,
                      std::uint64_t seed, double wiggle) {
  const double d0 = m->distance(p, q);
  if (target_length < d0) throw ConfigError("random_wiggle: target shorter than the distance");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  const double h = 0.02;
  auto gauss = [&](const Point& x) {
    Vec g = Vec::Zero(m->coord_dim());
    for (const Vec& e : m->tangent_basis(x)) g += nd(rng) * e;
    return g;
  };
  std::vector<Point> pts{p};
  Vec v = gauss(p);
  v /= m->norm(p, v);
  const int steps = static_cast<int>(std::ceil(target_length / h));
  for (int k = 0; k < steps; ++k) {
    const Point x = m->exp(pts.back(), h * v);
    Vec w = m->project_tangent(x, v) + std::sqrt(h) * wiggle * gauss(x);
    w = m->project_tangent(x, w);
    v = w / m->norm(x, w);
    pts.push_back(x);
  }
  const PLCurve walk(m, std::move(pts));
  auto excess = [&](double s) { return s + m->distance(walk.point_at(s), q) - target_length; };
  double lo = 0.0, hi = std::min(walk.length(), target_length);
  if (excess(hi) < 0.0) throw ConfigError("random_wiggle: walk too short");
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  const PLCurve head = subcurve(walk, 0.0, hi);
  return concat(head, PLCurve::geodesic(m, head.back(), q));
}

PLCurve winding_line(const ManifoldPtr& m, const Point& p, double wx, double wy, double wobble, int waves,
                     double max_gap) {
  const auto* T = dynamic_cast<const FlatTorus*>(m.get());
  if (!T || T->dim() != 2) throw ConfigError("winding_line needs a flat 2-torus");
  const auto& P = T->periods();
  Vec dir = make_point({wx * P[0], wy * P[1]});
  const double len = dir.norm();
  if (len == 0.0) throw ConfigError("winding_line: zero direction");
  const Vec nrm = make_point({-dir(1) / len, dir(0) / len});
  const double approx = len + 4.0 * waves * std::abs(wobble) * 2.0 * pi;
  const int n = std::max(2, static_cast<int>(std::ceil(2.0 * approx / max_gap)));
  std::vector<Point> pts;
  for (int k = 0; k <= n; ++k) {
    const double u = static_cast<double>(k) / n;
    pts.push_back(T->canonical(p + u * dir + wobble * std::sin(2.0 * pi * waves * u) * nrm));
  }
  pts.front() = T->canonical(p);
  if (std::floor(wx) == wx && std::floor(wy) == wy) pts.back() = pts.front();
  return PLCurve(m, std::move(pts));
}

}  // namespace geoloop
