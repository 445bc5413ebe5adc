#include "geoloop/certificates.hpp"

#include <cmath>
#include <numbers>

namespace geoloop {

namespace {

struct Entry {
  Formula f;
  const char* name;
  const char* text;
  std::vector<std::string> symbols;
};

const std::vector<Entry>& table() {
  static const std::vector<Entry> t{
      {Formula::L_plus_2a, "L_plus_2a", "L + 2a", {"L", "a"}},
      {Formula::l_plus_a, "l_plus_a", "l + a", {"l", "a"}},
      {Formula::l_plus_3a_delta, "l_plus_3a_delta", "l + 3a + delta", {"l", "a", "delta"}},
      {Formula::two_l_4a, "two_l_4a", "2l + 4a + delta + epsilon", {"l", "a", "delta", "epsilon"}},
      {Formula::three_l_5a, "three_l_5a", "3l + 5a", {"l", "a"}},
      {Formula::L_5a_3l, "L_5a_3l", "L + 5a + 3l", {"L", "a", "l"}},
      {Formula::eight_pi_m, "eight_pi_m", "8 pi m", {"m"}},
      {Formula::step_count, "step_count", "floor((L - l - a) / delta) + 1", {"L", "l", "a", "delta"}},
      {Formula::general_bound, "general_bound", "((4k + 2)m + (2k - 3))a", {"k", "m", "a"}},
  };
  return t;
}

const Entry& entry(Formula f) {
  for (const Entry& e : table())
    if (e.f == f) return e;
  throw std::invalid_argument("unknown formula");
}

double get(const Params& p, const std::string& s) {
  auto it = p.find(s);
  if (it == p.end()) throw MissingSymbol("missing symbol '" + s + "'");
  return it->second;
}

double opt(const Params& p, const std::string& s) {
  auto it = p.find(s);
  return it == p.end() ? 0.0 : it->second;
}

}  // namespace

std::string formula_name(Formula f) { return entry(f).name; }
std::string formula_text(Formula f) { return entry(f).text; }
std::vector<std::string> formula_symbols(Formula f) { return entry(f).symbols; }

Formula formula_from_name(const std::string& name) {
  for (const Entry& e : table())
    if (name == e.name) return e.f;
  throw ConfigError("unknown formula '" + name + "'");
}

double evaluate(Formula f, const Params& p) {
  switch (f) {
    case Formula::L_plus_2a:
      return get(p, "L") + 2.0 * get(p, "a");
    case Formula::l_plus_a:
      return get(p, "l") + get(p, "a");
    case Formula::l_plus_3a_delta:
      return get(p, "l") + 3.0 * get(p, "a") + get(p, "delta");
    case Formula::two_l_4a:
      return 2.0 * get(p, "l") + 4.0 * get(p, "a") + get(p, "delta") + get(p, "epsilon");
    case Formula::three_l_5a:
      return 3.0 * get(p, "l") + 5.0 * get(p, "a");
    case Formula::L_5a_3l:
      return get(p, "L") + 5.0 * get(p, "a") + 3.0 * get(p, "l");
    case Formula::eight_pi_m:
      return 8.0 * std::numbers::pi * get(p, "m");
    case Formula::step_count:
      return std::floor((get(p, "L") - get(p, "l") - get(p, "a")) / get(p, "delta")) + 1.0;
    case Formula::general_bound: {
      const double k = get(p, "k"), m = get(p, "m");
      return ((4.0 * k + 2.0) * m + (2.0 * k - 3.0)) * get(p, "a");
    }
  }
  throw std::invalid_argument("unknown formula");
}

double SlackPolicy::operator()(const Params& p) const {
  const double base = c0 ? *c0 : c0_per_a * opt(p, "a");
  return base + c_delta * opt(p, "delta") + c_epsilon * opt(p, "epsilon");
}

BoundCertificate make_certificate(Formula f, Params p, double measured, double slack) {
  BoundCertificate c;
  c.formula = f;
  c.claimed = evaluate(f, p);
  c.params = std::move(p);
  c.measured = measured;
  c.slack = slack;
  c.decide();
  return c;
}

BoundCertificate verify(BoundCertificate cert, const std::vector<PLCurve>& frames) {
  double m = 0.0;
  for (const PLCurve& f : frames) m = std::max(m, remeasure(f));
  cert.claimed = evaluate(cert.formula, cert.params);
  cert.measured = m;
  cert.decide();
  return cert;
}

}  // namespace geoloop
