#include <doctest.h>

#include "geoloop/birkhoff.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace geoloop;

namespace {

const double pi = std::numbers::pi;

ManifoldPtr unit_torus() { return std::make_shared<FlatTorus>(std::vector<double>{1.0, 1.0}); }

// Closed curve x(u) = p + (wx u, wy u) + wobble, u in [0,1].
PLCurve torus_loop(const ManifoldPtr& T, double x0, double y0, int wx, int wy, double amp, int n) {
  std::vector<Point> pts;
  for (int i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / n;
    const double w = amp * std::sin(2 * pi * 3 * u);
    pts.push_back(T->canonical(make_point({x0 + wx * u - wy * w, y0 + wy * u + wx * w})));
  }
  pts.back() = pts.front();
  return PLCurve(T, std::move(pts));
}

PLCurve circle(const ManifoldPtr& S, double lat, int n) {
  std::vector<Point> pts;
  const double z = std::sin(lat), r = std::cos(lat);
  for (int i = 0; i <= n; ++i) {
    const double t = 2 * pi * (i % n) / n;
    pts.push_back(make_point({r * std::cos(t), r * std::sin(t), z}));
  }
  return PLCurve(S, std::move(pts));
}

bool monotone(const ShorteningTrace& t) {
  const auto l = t.stage_lengths();
  for (std::size_t i = 1; i < l.size(); ++i)
    if (l[i] > l[i - 1] + 1e-12) return false;
  return true;
}

}  // namespace

TEST_CASE("constant loop is returned unchanged") {
  auto S = std::make_shared<RoundSphere>(2, 1.0);
  const auto t = shorten_based_loop(LoopAt::constant(S, make_point({0, 0, 1})));
  CHECK(t.iterations == 0);
  CHECK(t.converged);
  CHECK(t.limit.is_constant());
}

TEST_CASE("small loop on the sphere contracts to its basepoint") {
  auto S = std::make_shared<RoundSphere>(2, 1.0);
  const PLCurve c = circle(S, pi / 2 - 0.048, 40);
  CHECK(std::abs(c.length() - 0.3) < 2e-3);
  const auto t = shorten_based_loop(LoopAt::from(c));
  CHECK(t.converged);
  CHECK(t.limit.is_constant());
  CHECK(t.limit.front() == c.front());
  CHECK(monotone(t));
}

TEST_CASE("flat torus based loop in class (1,0) reaches the systole") {
  auto T = unit_torus();
  const PLCurve c = torus_loop(T, 0.3, 0.4, 1, 0, 0.1846, 200);
  CHECK(std::abs(c.length() - 2.5) < 0.1);
  const auto t = shorten_based_loop(LoopAt::from(c));
  CHECK(t.converged);
  CHECK(std::abs(t.limit.length() - 1.0) < 1e-4);
  CHECK(monotone(t));
  for (const auto& s : t.stages) {
    CHECK(s.front() == c.front());
    CHECK(s.back() == c.front());
  }
  CHECK(geodesic_residual(t.limit, false) < 1e-4);
  CHECK(probe_local_minimality(t.limit, true) >= -1e-6);
  CHECK(std::abs(sweep_delta(t.limit, true)) < 1e-6);
}

TEST_CASE("flat torus free loop in class (0,1) reaches the systole") {
  auto T = unit_torus();
  const PLCurve c = torus_loop(T, 0.3, 0.4, 0, 1, 0.2295, 240);
  CHECK(std::abs(c.length() - 3.0) < 0.2);
  const auto t = shorten_free_loop(c);
  CHECK(t.converged);
  CHECK(std::abs(t.limit.length() - 1.0) < 1e-4);
  CHECK(!t.basepoint);
  CHECK(monotone(t));
  CHECK(probe_local_minimality(t.limit, false) >= -1e-6);
}

TEST_CASE("great circle is a fixed point of free shortening") {
  auto S = std::make_shared<RoundSphere>(2, 1.0);
  const PLCurve c = circle(S, 0.0, 100);
  const auto t = shorten_free_loop(c);
  CHECK(std::abs(t.limit.length() - 2 * pi) < 1e-4);
  CHECK(std::abs(sweep_delta(t.limit, false)) < 1e-6);
  CHECK(geodesic_residual(t.limit, true) < 1e-4);
}

TEST_CASE("contractible free loop on the sphere collapses") {
  auto S = std::make_shared<RoundSphere>(2, 1.0);
  const auto t = shorten_free_loop(circle(S, 0.6, 80));
  CHECK(t.converged);
  CHECK(t.limit.length() < 1e-6);
  CHECK(monotone(t));
}

TEST_CASE("open curves are rejected") {
  auto S = std::make_shared<RoundSphere>(2, 1.0);
  const PLCurve c = PLCurve::geodesic(S, make_point({1, 0, 0}), make_point({0, 1, 0}));
  CHECK_THROWS_AS(shorten_free_loop(c), EndpointMismatch);
}

TEST_CASE("budget exhaustion leaves converged unset") {
  auto T = unit_torus();
  BirkhoffOptions opt;
  opt.max_sweeps = 3;
  const auto t = shorten_based_loop(LoopAt::from(torus_loop(T, 0.1, 0.1, 1, 0, 0.1846, 200)), opt);
  CHECK(!t.converged);
  CHECK(t.iterations == 3);
  CHECK(monotone(t));
}

TEST_CASE("consecutive stages stay within the injectivity margin") {
  auto T = unit_torus();
  const auto t = shorten_based_loop(LoopAt::from(torus_loop(T, 0.5, 0.5, 1, 0, 0.15, 200)));
  for (std::size_t i = 1; i < t.stages.size(); ++i) {
    const PLCurve& a = t.stages[i - 1];
    const PLCurve& b = t.stages[i];
    for (int k = 0; k <= 50; ++k) {
      const double u = k / 50.0;
      CHECK(T->distance(a.point_at(u * a.length()), b.point_at(u * b.length())) < kInjectivityMargin);
    }
  }
}

TEST_CASE("monotonicity over many random traces") {
  std::vector<ManifoldPtr> models{std::make_shared<RoundSphere>(2, 1.0), unit_torus(),
                                  std::make_shared<Ellipsoid>(std::vector<double>{1.0, 1.1, 0.9})};
  int traces = 0;
  for (const auto& m : models) {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> nd;
    const int count = m->kind() == ManifoldKind::Ellipsoid ? 20 : 100;
    for (int k = 0; k < count; ++k) {
      const Point p = m->sample(rng);
      std::vector<Point> pts{p};
      for (int i = 0; i < 12; ++i) {
        const Point& x = pts.back();
        Vec v = Vec::Zero(m->coord_dim());
        for (const Vec& e : m->tangent_basis(x)) v += nd(rng) * e;
        pts.push_back(m->exp(x, v * (0.08 / m->norm(x, v))));
      }
      const PLCurve back = PLCurve::geodesic(m, pts.back(), p, 0.05);
      for (const Point& x : back.points()) pts.push_back(x);
      pts.back() = p;
      BirkhoffOptions opt;
      opt.record_spacing = 0.01;
      const auto t = shorten_based_loop(LoopAt::from(PLCurve(m, pts)), opt);
      CHECK(monotone(t));
      CHECK(t.limit.front() == p);
      ++traces;
    }
  }
  CHECK(traces >= 200);
}
