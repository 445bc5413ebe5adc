#include <doctest.h>

#include "geoloop/generators.hpp"
#include "geoloop/theorem_b.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace geoloop;

namespace {

const double pi = std::numbers::pi;

ManifoldPtr sphere() { return std::make_shared<RoundSphere>(2, 1.0); }

ShorteningParams params(double l, double a, double delta) {
  ShorteningParams p;
  p.l = l;
  p.a = a;
  p.delta = delta;
  return p;
}

PLCurve wiggle7(const ManifoldPtr& S) { return random_wiggle(S, make_point({0, 0, 1}), make_point({1, 0, 0}), 7.0, 42); }

}  // namespace

TEST_CASE("params validation") {
  CHECK_THROWS_AS(params(-1, 1, 1).validate(), ConfigError);
  CHECK_THROWS_AS(params(0, 0, 1).validate(), ConfigError);
  CHECK_THROWS_AS(params(0, 1, 0).validate(), ConfigError);
  CHECK_NOTHROW(params(0, 1, 1).validate());
}

TEST_CASE("a curve no longer than l + a is returned unchanged") {
  auto S = sphere();
  const PLCurve alpha = PLCurve::geodesic(S, make_point({0, 0, 1}), S->exp(make_point({0, 0, 1}), make_point({0.5, 0, 0})));
  const ShorteningResult r = shorten_curve(alpha, params(0.1, pi, 0.05));
  CHECK(r.vacuous);
  CHECK(r.steps == 0);
  CHECK(same_points(r.final, alpha));
  CHECK(check_family(r, params(0.1, pi, 0.05), 0.0).pass());
}

TEST_CASE("length 7 wiggle on the sphere") {
  auto S = sphere();
  const PLCurve alpha = wiggle7(S);
  REQUIRE(alpha.length() == doctest::Approx(7.0).epsilon(1e-9));
  const ShorteningParams P = params(0.1, pi, 0.05);
  const ShorteningResult r = shorten_curve(alpha, P);
  CHECK(r.predicted_steps == 76);
  CHECK(r.steps <= 77);
  CHECK(r.steps >= 1);
  const double slack = SlackPolicy{}(P.symbols(7.0));
  const FamilyCheck chk = check_family(r, P, slack);
  CHECK(chk.pass());
  CHECK(chk.final_length <= 0.1 + pi + slack);
  CHECK(chk.max_homotopy <= 7.0 + 2 * pi + slack);
  CHECK(chk.max_gamma <= 0.1 + 3 * pi + 0.05 + slack);
  CHECK(r.family.frame(0).is_constant());
  for (const BoundCertificate& c : chk.certs) CHECK(c.pass);
}

TEST_CASE("partial shortening endpoints") {
  auto S = sphere();
  const PLCurve alpha = wiggle7(S);
  const ShorteningParams P = params(0.1, pi, 0.05);
  const ShorteningResult r = shorten_curve(alpha, P);
  CHECK(remeasure(partial_shortening(r.family, 0.0)) == doctest::Approx(7.0).epsilon(1e-9));
  CHECK(same_points(partial_shortening(r.family, 1.0), r.final));
  const double slack = SlackPolicy{}(P.symbols(7.0));
  for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const PLCurve c = partial_shortening(r.family, s);
    CHECK(c.front() == alpha.front());
    CHECK(c.back() == alpha.back());
    CHECK(remeasure(c) <= 0.1 + 3 * pi + 0.05 + 7.0 + slack);
  }
}

TEST_CASE("shortening a prefix reproduces a prefix of the family") {
  auto S = sphere();
  const PLCurve alpha = wiggle7(S);
  const ShorteningParams P = params(0.1, pi, 0.05);
  const ShorteningResult full = shorten_curve(alpha, P);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 5; ++k) {
    const double x = std::uniform_real_distribution<double>(3.5, 7.0)(rng);
    const ShorteningResult sub = shorten_curve(subcurve(alpha, 0, x), P);
    const ShorteningFamily& F = full.family;
    const ShorteningFamily& G = sub.family;
    REQUIRE(G.frame_count() <= F.frame_count());
    for (std::size_t i = 0; i < G.frame_count(); ++i) {
      // Past the last cut of the prefix run, compare at equal tau inside the full run's moving span.
      const bool tail = G.span_of(i) >= 2 * sub.steps;
      const PLCurve ref = tail ? sync_gamma(F, SideState{F.spans()[2 * sub.steps].first, G.tau(i)}) : F.frame(i);
      if (!tail) CHECK(std::abs(F.tau(i) - G.tau(i)) <= 1e-6);
      CHECK(frame_displacement(ref, G.frame(i)) <= 1e-6);
      CHECK(std::abs(ref.length() - G.frame(i).length()) <= 1e-6);
    }
  }
}

TEST_CASE("flat torus with l below the systole raises HypothesisViolated") {
  auto T = std::make_shared<FlatTorus>(std::vector<double>{1.0, 1.0}, 0.9);
  const PLCurve alpha = winding_line(T, make_point({0.2, 0.3}), 2.5, 0.3, 0.02, 3);
  try {
    shorten_curve(alpha, params(0.5, 0.9, 0.05));
    FAIL("expected HypothesisViolated");
  } catch (const HypothesisViolated& e) {
    CHECK(e.loop_length == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(e.loop.is_closed());
    CHECK(remeasure(e.loop) == doctest::Approx(e.loop_length).epsilon(1e-12));
  }
}

TEST_CASE("family partitions and spans") {
  auto S = sphere();
  const ShorteningResult r = shorten_curve(wiggle7(S), params(0.1, pi, 0.05));
  const ShorteningFamily& F = r.family;
  const auto P = F.P();
  const auto Q = F.Q();
  CHECK(P.front() == 0.0);
  CHECK(P.back() == F.alpha().length());
  CHECK(Q.size() == 2 * P.size() - 1);
  CHECK(Q.front() == 0.0);
  CHECK(Q.back() == 1.0);
  for (std::size_t k = 0; k < F.spans().size(); ++k) CHECK(F.spans()[k].frozen == (k % 2 == 1));
  for (std::size_t i = 1; i < F.frame_count(); ++i) CHECK(F.tau(i) >= F.tau(i - 1));
  CHECK(same_points(F.frame(F.frame_count() - 1), r.final));
}

TEST_CASE("finer partition through the refine factor") {
  auto S = sphere();
  ShorteningParams P = params(0.1, pi, 0.05);
  P.refine = 2;
  const ShorteningResult r = shorten_curve(wiggle7(S), P);
  CHECK(r.predicted_steps == 151);
  CHECK(check_family(r, P, SlackPolicy{}(P.symbols(7.0))).pass());
}
