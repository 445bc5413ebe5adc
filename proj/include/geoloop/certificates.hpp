#pragma once

#include "geoloop/curve.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace geoloop {

class MissingSymbol : public Error {
 public:
  using Error::Error;
};

enum class Formula {
  L_plus_2a,
  l_plus_a,
  l_plus_3a_delta,
  two_l_4a,
  three_l_5a,
  L_5a_3l,
  eight_pi_m,
  step_count,
  general_bound,
};

// Symbols: l, a, delta, epsilon, k, m, L.
using Params = std::map<std::string, double>;

std::string formula_name(Formula f);
Formula formula_from_name(const std::string& name);
std::string formula_text(Formula f);
std::vector<std::string> formula_symbols(Formula f);

double evaluate(Formula f, const Params& p);

// slack = c0_per_a * a + c_delta * delta + c_epsilon * epsilon.
struct SlackPolicy {
  double c0_per_a = 1e-3;
  double c_delta = 3.0;
  double c_epsilon = 3.0;
  // Overrides the a-proportional term when set (CLI --slack-c0).
  std::optional<double> c0;

  double operator()(const Params& p) const;
};

struct BoundCertificate {
  Formula formula = Formula::l_plus_a;
  Params params;
  double claimed = 0.0;
  double measured = 0.0;
  double slack = 0.0;
  bool pass = false;

  void decide() { pass = measured <= claimed + slack; }
};

BoundCertificate make_certificate(Formula f, Params p, double measured, double slack);

// Re-measures every frame and overwrites measured and pass.
BoundCertificate verify(BoundCertificate cert, const std::vector<PLCurve>& frames);

}  // namespace geoloop
