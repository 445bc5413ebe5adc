#include <doctest.h>

#include "geoloop/generators.hpp"
#include "geoloop/homotopy.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace geoloop;

namespace {

const double pi = std::numbers::pi;
constexpr double kSlack = 1e-6;

ManifoldPtr sphere() { return std::make_shared<RoundSphere>(2, 1.0); }

Point random_point(const ManifoldPtr& S, std::mt19937_64& rng) { return S->sample(rng); }

Point near(const ManifoldPtr& S, const Point& p, double d, std::mt19937_64& rng) {
  const auto basis = S->tangent_basis(p);
  const double th = std::uniform_real_distribution<double>(0, 2 * pi)(rng);
  return S->exp(p, d * (std::cos(th) * basis[0] + std::sin(th) * basis[1]));
}

LengthHomotopy contraction_of(const PLCurve& loop) {
  LengthHomotopy H = radial_contraction(LoopAt::from(loop));
  H.certified_bound = H.remeasured_max();
  return H;
}

void check_endpoints(const LengthHomotopy& h, const Point& p, const Point& q) {
  for (const PLCurve& f : h.frames) {
    REQUIRE(f.front() == p);
    REQUIRE(f.back() == q);
  }
}

}  // namespace

TEST_CASE("lemma on random sphere instances stays below l3 + l2 with fixed endpoints") {
  auto S = sphere();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(0, 1);
  for (int n = 0; n < 50; ++n) {
    const Point p = random_point(S, rng);
    const double d = 0.2 + 0.6 * U(rng);
    const Point q = near(S, p, d, rng);
    const PLCurve g1 = random_wiggle(S, p, q, d + 0.1 + 0.4 * U(rng), 100 + n, 3.0);
    const PLCurve g2 = n % 3 == 0 ? PLCurve::geodesic(S, p, q) : random_wiggle(S, p, q, d + 0.3 * U(rng), 500 + n, 3.0);
    const LengthHomotopy H = contraction_of(concat(g1, reverse(g2)));
    const LengthHomotopy out = lemma_path_homotopy(g1, g2, H, kSlack);
    const double bound = H.certified_bound + g2.length();
    CHECK(out.certified_bound == doctest::Approx(bound));
    for (const PLCurve& f : out.frames) REQUIRE(remeasure(f) <= bound + kSlack);
    check_endpoints(out, p, q);
    CHECK(same_points(out.frames.front(), g1));
  }
}

TEST_CASE("contracting to the constant loop gives a path homotopy g1 -> g2") {
  auto S = sphere();
  const Point p = make_point({0, 0, 1}), q = make_point({1, 0, 0});
  const PLCurve g1 = PLCurve::geodesic(S, p, q);
  const PLCurve g2 = concat(PLCurve::geodesic(S, p, make_point({0, 1, 0})),
                            PLCurve::geodesic(S, make_point({0, 1, 0}), q));
  const LengthHomotopy H = contraction_of(concat(g1, reverse(g2)));
  REQUIRE(H.frames.back().is_constant());
  const LengthHomotopy out = lemma_path_homotopy(g1, g2, H, kSlack);
  CHECK(same_points(out.frames.front(), g1));
  CHECK(remeasure(out.frames.back()) == doctest::Approx(g2.length()).epsilon(1e-12));
  CHECK(out.frames.back().back() == q);
  check_endpoints(out, p, q);
}

TEST_CASE("quarter circles: every frame below l3 + l2") {
  auto S = sphere();
  const Point p = make_point({1, 0, 0}), q = make_point({0, 1, 0});
  const PLCurve g1 = PLCurve::geodesic(S, p, q);
  const Point mid = make_point({std::sqrt(0.5), 0, std::sqrt(0.5)});
  const PLCurve g2 = concat(PLCurve::geodesic(S, p, mid), PLCurve::geodesic(S, mid, q));
  const LengthHomotopy H = contraction_of(concat(g1, reverse(g2)));
  const LengthHomotopy out = lemma_path_homotopy(g1, g2, H, kSlack);
  double mx = 0;
  for (const PLCurve& f : out.frames) mx = std::max(mx, remeasure(f));
  CHECK(mx <= H.certified_bound + g2.length() + kSlack);
  CHECK(out.within_bound());
}

TEST_CASE("g1 = g2 with a trivial contraction only runs the doubling phase") {
  auto S = sphere();
  const Point p = make_point({0, 0, 1}), q = make_point({0, 1, 0});
  const PLCurve g = PLCurve::geodesic(S, p, q);
  LengthHomotopy H;
  H.frames = {concat(g, reverse(g))};
  H.start_point = p;
  H.end_point = p;
  H.certified_bound = 2 * g.length();
  const LengthHomotopy out = lemma_path_homotopy(g, g, H, kSlack);
  for (const PLCurve& f : out.frames) CHECK(remeasure(f) <= 3 * g.length() + kSlack);
  check_endpoints(out, p, q);
}

TEST_CASE("lemma rejects a homotopy that does not start at g1 * rev(g2)") {
  auto S = sphere();
  const Point p = make_point({0, 0, 1}), q = make_point({0, 1, 0});
  const PLCurve g = PLCurve::geodesic(S, p, q);
  const LengthHomotopy H = constant_homotopy(PLCurve::constant(S, p));
  CHECK_THROWS_AS(lemma_path_homotopy(g, g, H, kSlack), EndpointMismatch);
}

TEST_CASE("circle-indexed lemma on random sphere instances stays below L + 2l") {
  auto S = sphere();
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> U(0, 1);
  for (int n = 0; n < 20; ++n) {
    const Point p = random_point(S, rng);
    const double d = 0.2 + 0.4 * U(rng);
    const Point q = near(S, p, d, rng);
    std::vector<PLCurve> f;
    for (int x = 0; x < 4; ++x) f.push_back(random_wiggle(S, p, q, d + 0.05 + 0.5 * U(rng), 1000 * n + x, 3.0));
    const std::size_t x0 = static_cast<std::size_t>(n) % f.size();
    std::vector<LengthHomotopy> Fh;
    for (const PLCurve& c : f) Fh.push_back(contraction_of(concat(c, reverse(f[x0]))));
    double L = 0;
    for (const PLCurve& c : f) L = std::max(L, c.length());
    const double l = f[x0].length();
    const auto out = lemma_sphere_contraction(f, x0, Fh, kSlack);
    REQUIRE(out.size() == f.size());
    for (std::size_t x = 0; x < out.size(); ++x) {
      CHECK(out[x].certified_bound == doctest::Approx(L + 2 * l));
      for (const PLCurve& fr : out[x].frames) REQUIRE(remeasure(fr) <= L + 2 * l + kSlack);
      check_endpoints(out[x], p, q);
      CHECK(same_points(out[x].frames.front(), f[x]));
    }
  }
}

TEST_CASE("circle-indexed lemma bound arithmetic: L = 2, l = 0.5 gives 3") {
  auto S = sphere();
  const Point p = make_point({0, 0, 1});
  const Point q = S->exp(p, make_point({0.5, 0, 0}));
  const std::vector<PLCurve> f{PLCurve::geodesic(S, p, q), random_wiggle(S, p, q, 2.0, 9, 3.0)};
  REQUIRE(f[0].length() == doctest::Approx(0.5).epsilon(1e-9));
  REQUIRE(f[1].length() == doctest::Approx(2.0).epsilon(1e-9));
  std::vector<LengthHomotopy> Fh;
  for (const PLCurve& c : f) Fh.push_back(contraction_of(concat(c, reverse(f[0]))));
  const auto out = lemma_sphere_contraction(f, 0, Fh, kSlack);
  for (const LengthHomotopy& h : out) CHECK(h.certified_bound == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("constant circle family keeps every frame below L + 2l") {
  auto S = sphere();
  const Point p = make_point({0, 0, 1}), q = make_point({0, 1, 0});
  const PLCurve g = PLCurve::geodesic(S, p, q);
  const std::vector<PLCurve> f(3, g);
  std::vector<LengthHomotopy> Fh(3, contraction_of(concat(g, reverse(g))));
  for (const LengthHomotopy& h : lemma_sphere_contraction(f, 1, Fh, kSlack)) {
    CHECK(h.certified_bound == doctest::Approx(3 * g.length()));
    CHECK(h.within_bound());
  }
}

TEST_CASE("moving endpoint variant carries the end along the track") {
  auto S = sphere();
  const Point p = make_point({0, 0, 1}), q1 = make_point({1, 0, 0}), q2 = S->exp(q1, make_point({0, 0.3, 0}));
  const PLCurve g1 = PLCurve::geodesic(S, p, q1);
  const PLCurve v = PLCurve::geodesic(S, q1, q2);
  const PLCurve g2 = PLCurve::geodesic(S, p, q2);
  const LengthHomotopy H = contraction_of(concat(concat(g1, v), reverse(g2)));
  const LengthHomotopy out = lemma_moving_endpoint(g1, v, g2, H, kSlack);
  CHECK(out.end_track.size() == out.frames.size());
  CHECK(out.frames.front().back() == q1);
  CHECK(out.frames.back().back() == q2);
  CHECK(out.within_bound());
}

TEST_CASE("doubling frames grow by twice the consumed tail") {
  auto S = sphere();
  const Point p = make_point({0, 0, 1}), q = make_point({1, 0, 0});
  const PLCurve c = PLCurve::geodesic(S, p, q);
  const PLCurve tail = PLCurve::geodesic(S, make_point({0, 1, 0}), q);
  const auto frames = doubling_frames(c, tail);
  CHECK(same_points(frames.front(), c));
  CHECK(remeasure(frames.back()) == doctest::Approx(c.length() + 2 * tail.length()).epsilon(1e-12));
  for (std::size_t i = 1; i < frames.size(); ++i) CHECK(frames[i].length() >= frames[i - 1].length() - 1e-12);
}
