#include <doctest.h>

#include "geoloop/certificates.hpp"

#include <cmath>
#include <numbers>

using namespace geoloop;

namespace {

const double pi = std::numbers::pi;

PLCurve quarter(const ManifoldPtr& S) { return PLCurve::geodesic(S, make_point({1, 0, 0}), make_point({0, 1, 0})); }

}  // namespace

TEST_CASE("formula evaluation") {
  CHECK(evaluate(Formula::eight_pi_m, {{"m", 1}}) == 8 * pi);
  CHECK(evaluate(Formula::l_plus_a, {{"l", 0}, {"a", pi}}) == pi);
  CHECK(evaluate(Formula::step_count, {{"L", 7}, {"l", 0.1}, {"a", pi}, {"delta", 0.05}}) == 76);
  CHECK(evaluate(Formula::L_plus_2a, {{"L", 7}, {"a", 1}}) == 9);
  CHECK(evaluate(Formula::l_plus_3a_delta, {{"l", 0.1}, {"a", 1}, {"delta", 0.05}}) == doctest::Approx(3.15));
  CHECK(evaluate(Formula::general_bound, {{"k", 1.5}, {"m", 2}, {"a", pi}}) == 16 * pi);
}

TEST_CASE("two_l_4a with l = 0 and no coarseness is 4 pi") {
  CHECK(evaluate(Formula::two_l_4a, {{"l", 0}, {"a", pi}, {"delta", 0}, {"epsilon", 0}}) == 4 * pi);
}

TEST_CASE("three_l_5a with k = 3/2, l = 2(k-1)a is the m = 1 general bound") {
  const double k = 1.5, a = pi, l = 2 * (k - 1) * a;
  const double v = evaluate(Formula::three_l_5a, {{"l", l}, {"a", a}});
  CHECK(v == doctest::Approx(8 * pi).epsilon(1e-15));
  CHECK(v == doctest::Approx(evaluate(Formula::general_bound, {{"k", k}, {"m", 1}, {"a", a}})).epsilon(1e-15));
}

TEST_CASE("missing symbol throws") {
  CHECK_THROWS_AS(evaluate(Formula::l_plus_a, {{"l", 1}}), MissingSymbol);
  CHECK_THROWS_AS(evaluate(Formula::L_5a_3l, {{"l", 1}, {"a", 1}}), MissingSymbol);
}

TEST_CASE("formula names round trip") {
  for (Formula f : {Formula::L_plus_2a, Formula::l_plus_a, Formula::l_plus_3a_delta, Formula::two_l_4a,
                    Formula::three_l_5a, Formula::L_5a_3l, Formula::eight_pi_m, Formula::step_count,
                    Formula::general_bound})
    CHECK(formula_from_name(formula_name(f)) == f);
  CHECK_THROWS_AS(formula_from_name("nope"), ConfigError);
}

TEST_CASE("slack policy") {
  SlackPolicy p;
  CHECK(p({{"a", pi}, {"delta", 0.05}}) == doctest::Approx(1e-3 * pi + 0.15));
  CHECK(p({{"a", pi}, {"delta", 0.01}, {"epsilon", 0.01}}) == doctest::Approx(1e-3 * pi + 0.06));
  p.c0 = 0.5;
  CHECK(p({{"a", pi}}) == doctest::Approx(0.5));
}

TEST_CASE("pass iff measured <= claimed + slack") {
  const Params p{{"l", 1}, {"a", 1}};
  CHECK(make_certificate(Formula::l_plus_a, p, 2.0, 0.0).pass);
  CHECK(make_certificate(Formula::l_plus_a, p, 2.1, 0.1).pass);
  CHECK_FALSE(make_certificate(Formula::l_plus_a, p, 2.2, 0.1).pass);
}

TEST_CASE("verify re-measures frames and catches a tampered certificate") {
  auto S = std::make_shared<RoundSphere>(2, 1.0);
  const std::vector<PLCurve> frames{quarter(S), PLCurve::constant(S, make_point({0, 0, 1}))};
  BoundCertificate c = make_certificate(Formula::l_plus_a, {{"l", 1}, {"a", 1}}, 1.0, 0.0);
  const BoundCertificate ok = verify(c, frames);
  CHECK(ok.measured == doctest::Approx(pi / 2).epsilon(1e-12));
  CHECK(ok.pass);

  c.claimed = 100.0;
  CHECK(verify(c, frames).claimed == 2.0);

  const BoundCertificate tight = verify(make_certificate(Formula::l_plus_a, {{"l", 0.5}, {"a", 0.5}}, 0.0, 0.0), frames);
  CHECK_FALSE(tight.pass);
}

TEST_CASE("verify is idempotent") {
  auto S = std::make_shared<RoundSphere>(2, 1.0);
  const std::vector<PLCurve> frames{quarter(S)};
  const BoundCertificate once = verify(make_certificate(Formula::l_plus_a, {{"l", 1}, {"a", 1}}, 0.0, 0.01), frames);
  const BoundCertificate twice = verify(once, frames);
  CHECK(once.measured == twice.measured);
  CHECK(once.claimed == twice.claimed);
  CHECK(once.pass == twice.pass);
}
