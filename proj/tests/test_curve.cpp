#include <doctest.h>

#include "geoloop/curve.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace geoloop;

namespace {

const double pi = std::numbers::pi;

std::vector<ManifoldPtr> models() {
  return {std::make_shared<RoundSphere>(2, 1.0), std::make_shared<RoundSphere>(3, 1.0),
          std::make_shared<FlatTorus>(std::vector<double>{1.0, 1.0}),
          std::make_shared<Ellipsoid>(std::vector<double>{1.0, 1.1, 0.9}),
          ParamSurface::torus_of_revolution(2.0, 0.5)};
}

// Random walk with steps below the injectivity margin.
PLCurve random_curve(const ManifoldPtr& m, std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> step(0.005, 0.09);
  std::vector<Point> pts{m->sample(rng)};
  for (int i = 1; i < n; ++i) {
    const Point& x = pts.back();
    Vec v = Vec::Zero(m->coord_dim());
    for (const Vec& e : m->tangent_basis(x)) v += nd(rng) * e;
    v *= step(rng) / m->norm(x, v);
    pts.push_back(m->exp(x, v));
  }
  return PLCurve(m, std::move(pts));
}

double resum(const PLCurve& c) {
  double s = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i) s += c.manifold().distance(c.points()[i - 1], c.points()[i]);
  return s;
}

}  // namespace

TEST_CASE("length of simple curves") {
  auto S = std::make_shared<RoundSphere>(2, 1.0);
  CHECK(PLCurve::constant(S, make_point({0, 0, 1})).length() == 0.0);
  const PLCurve quarter = PLCurve::geodesic(S, make_point({1, 0, 0}), make_point({0, 1, 0}));
  CHECK(std::abs(quarter.length() - pi / 2) < 1e-6);
  CHECK(!quarter.is_constant());
}

TEST_CASE("length equals independent re-summation") {
  for (const auto& m : models()) {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 5; ++k) {
      const PLCurve c = random_curve(m, rng, 50);
      CHECK(std::abs(c.length() - resum(c)) < 1e-9);
      CHECK(std::abs(c.length() - remeasure(c)) < 1e-9);
    }
  }
}

TEST_CASE("concat") {
  auto S = std::make_shared<RoundSphere>(2, 1.0);
  const Point a = make_point({1, 0, 0}), b = make_point({0, 1, 0}), c = make_point({-1, 0, 0});
  const PLCurve ab = PLCurve::geodesic(S, a, b), bc = PLCurve::geodesic(S, b, c);
  CHECK(std::abs(concat(ab, bc).length() - pi) < 1e-9);
  CHECK(concat(ab, PLCurve::constant(S, b)).length() == ab.length());
  CHECK_THROWS_AS(concat(ab, ab), EndpointMismatch);

  auto T = std::make_shared<FlatTorus>(std::vector<double>{10.0, 10.0});
  const PLCurve u = PLCurve::geodesic(T, make_point({0, 0}), make_point({1.3, 0}));
  const PLCurve v = PLCurve::geodesic(T, make_point({1.3, 0}), make_point({1.3, 0.7}));
  CHECK(std::abs(concat(u, v).length() - 2.0) < 1e-9);
}

TEST_CASE("reverse") {
  auto S = std::make_shared<RoundSphere>(2, 1.0);
  const PLCurve k = PLCurve::constant(S, make_point({0, 0, 1}));
  CHECK(same_points(reverse(k), k));
  std::mt19937_64 rng(4);
  const PLCurve c = random_curve(S, rng, 30);
  CHECK(same_points(reverse(reverse(c)), c));
  CHECK(reverse(c).length() == c.length());
  CHECK(reverse(c).front() == c.back());
}

TEST_CASE("subcurve") {
  auto S = std::make_shared<RoundSphere>(2, 1.0);
  std::mt19937_64 rng(5);
  const PLCurve c = random_curve(S, rng, 40);
  const double len = c.length();
  CHECK(same_points(subcurve(c, 0, len), c));
  CHECK(subcurve(c, 0.4, 0.4).is_constant());
  CHECK_THROWS_AS(subcurve(c, -0.1, 0.5), RangeError);
  CHECK_THROWS_AS(subcurve(c, 0.5, len + 0.1), RangeError);
  CHECK_THROWS_AS(subcurve(c, 0.6, 0.5), RangeError);

  std::uniform_real_distribution<double> U(0.0, len);
  for (int k = 0; k < 20; ++k) {
    const double s = U(rng);
    const PLCurve h = subcurve(c, 0, s), t = subcurve(c, s, len);
    CHECK(std::abs(h.length() - s) < 1e-6);
    CHECK(std::abs(remeasure(h) - s) < 1e-6);
    CHECK(std::abs(concat(h, t).length() - len) < 1e-6);
    CHECK(h.back() == c.point_at(s));
  }
}

TEST_CASE("refine") {
  auto S = std::make_shared<RoundSphere>(2, 1.0);
  const PLCurve q = PLCurve::geodesic(S, make_point({1, 0, 0}), make_point({0, 1, 0}), 0.08);
  CHECK(same_points(refine(q, 0.1), q));
  const double gap = max_segment(q);
  const PLCurve h = refine(q, gap / 2);
  CHECK(h.size() == 2 * q.size() - 1);
  CHECK(max_segment(h) <= gap / 2 + 1e-12);
  CHECK(std::abs(remeasure(h) - q.length()) < 1e-8);
  CHECK_THROWS(refine(q, 0.0));
}

TEST_CASE("property sweep over random curves") {
  for (const auto& m : models()) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> npts(2, 25);
    for (int k = 0; k < 200; ++k) {
      const PLCurve c = random_curve(m, rng, npts(rng));
      const double len = c.length();
      CHECK(same_points(reverse(reverse(c)), c));
      CHECK(std::abs(reverse(c).length() - len) < 1e-12);
      const PLCurve r = refine(c, 0.02);
      CHECK(max_segment(r) <= 0.02 + 1e-12);
      CHECK(std::abs(remeasure(r) - len) < 1e-8);
      std::uniform_real_distribution<double> U(0.0, len);
      const double s = U(rng);
      const PLCurve h = subcurve(c, 0, s), t = subcurve(c, s, len);
      CHECK(std::abs(concat(h, t).length() - len) < 1e-6);
      CHECK(std::abs(concat(c, reverse(c)).length() - 2 * len) < 1e-9);
    }
  }
}

TEST_CASE("subcurve length is monotone and 1-Lipschitz") {
  auto E = std::make_shared<Ellipsoid>(std::vector<double>{1.0, 1.1, 0.9});
  std::mt19937_64 rng(12);
  const PLCurve c = random_curve(E, rng, 60);
  double prev = 0.0, sprev = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double s = c.length() * k / 200.0;
    const double l = remeasure(subcurve(c, 0, s));
    CHECK(l >= prev - 1e-12);
    CHECK(l - prev <= (s - sprev) + 1e-9);
    prev = l;
    sprev = s;
  }
}

TEST_CASE("loops") {
  auto S = std::make_shared<RoundSphere>(2, 1.0);
  const Point p = make_point({0, 0, 1});
  CHECK_THROWS_AS(LoopAt::from(PLCurve::geodesic(S, p, make_point({1, 0, 0}))), EndpointMismatch);
  const LoopAt k = LoopAt::constant(S, p);
  CHECK(k.curve.is_closed());
  CHECK(k.length() == 0.0);
}
