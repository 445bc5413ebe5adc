#include "geoloop/theorem_a.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace geoloop {

namespace {

int pieces(double len, double step) { return std::max(1, static_cast<int>(std::ceil(len / step - 1e-12))); }

std::vector<double> doubling_positions(double len) {
  if (len == 0.0) return {0.0};
  const int n = pieces(len, kFrameStep);
  std::vector<double> xs;
  for (int k = 0; k <= n; ++k) xs.push_back(k == n ? len : len * k / n);
  return xs;
}

FamilySpan trivial_frozen(const PLCurve& head, double t) {
  FamilySpan s;
  s.frozen = true;
  s.fixed.t = t;
  s.fixed.head = head;
  s.fixed.head_length = head.length();
  s.fixed.edge = PLCurve::constant(head.manifold_ptr(), head.front());
  s.fixed.trivial = true;
  return s;
}

}  // namespace

void ShorteningParams::validate() const {
  if (!(l >= 0.0)) throw ConfigError("l must be nonnegative");
  if (!(a > 0.0)) throw ConfigError("a must be positive");
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  if (refine < 1) throw ConfigError("refine must be at least 1");
}

Params ShorteningParams::symbols(double L) const { return {{"l", l}, {"a", a}, {"delta", delta}, {"L", L}}; }

ShorteningFamily::ShorteningFamily(PLCurve alpha, std::vector<FamilySpan> spans)
    : alpha_(std::move(alpha)), spans_(std::move(spans)) {
  std::size_t first = 0;
  for (FamilySpan& s : spans_) {
    if (s.frozen)
      s.frames = s.fixed.trivial ? 2 : s.fixed.xs.size() + s.fixed.stages.size() - 1;
    else
      s.frames = static_cast<std::size_t>(s.moving.segments) + 1;
    s.first = first;
    first += s.frames - 1;
  }
  count_ = first + 1;
  final_ = frame(count_ - 1);
}

std::size_t ShorteningFamily::span_of(std::size_t i) const {
  auto it = std::upper_bound(spans_.begin(), spans_.end(), i,
                             [](std::size_t v, const FamilySpan& s) { return v < s.first; });
  return static_cast<std::size_t>(it - spans_.begin()) - 1;
}

bool ShorteningFamily::in_frozen(std::size_t i) const { return spans_[span_of(i)].frozen; }

double ShorteningFamily::tau(std::size_t i) const {
  const FamilySpan& s = spans_[span_of(i)];
  if (s.frozen) return s.fixed.t;
  const std::size_t k = i - s.first;
  if (static_cast<int>(k) == s.moving.segments) return s.moving.t1;
  return s.moving.t0 + (s.moving.t1 - s.moving.t0) * static_cast<double>(k) / s.moving.segments;
}

PLCurve ShorteningFamily::frame(std::size_t i) const {
  const FamilySpan& s = spans_[span_of(i)];
  const std::size_t k = i - s.first;
  if (!s.frozen) {
    const double t = tau(i);
    if (t == s.moving.t0) return s.moving.base;
    return concat(s.moving.base, subcurve(alpha_, s.moving.t0, t));
  }
  const FrozenSpan& f = s.fixed;
  if (f.trivial) return f.head;
  if (k < f.xs.size()) {
    const double x = f.xs[k];
    if (x == 0.0) return f.head;
    const double len = f.edge.length();
    const PLCurve d = x == len ? f.edge : subcurve(f.edge, len - x, len);
    const PLCurve r = reverse(d);
    return concat({&f.head, &r, &d});
  }
  return concat(f.stages[k - f.xs.size() + 1], f.edge);
}

double ShorteningFamily::frame_length(std::size_t i) const {
  const FamilySpan& s = spans_[span_of(i)];
  const std::size_t k = i - s.first;
  if (!s.frozen) return s.moving.base.length() + (tau(i) - s.moving.t0);
  const FrozenSpan& f = s.fixed;
  if (f.trivial) return f.head_length;
  if (k < f.xs.size()) return f.head_length + 2.0 * f.xs[k];
  return f.stages[k - f.xs.size() + 1].length() + f.edge.length();
}

std::vector<double> ShorteningFamily::P() const {
  std::vector<double> p;
  for (const FamilySpan& s : spans_)
    if (!s.frozen) p.push_back(s.moving.t0);
  for (auto it = spans_.rbegin(); it != spans_.rend(); ++it)
    if (!it->frozen) {
      p.push_back(it->moving.t1);
      break;
    }
  return p;
}

std::vector<double> ShorteningFamily::Q() const {
  std::vector<double> q;
  for (const FamilySpan& s : spans_) q.push_back(this->s(s.first));
  q.push_back(1.0);
  return q;
}

ShorteningResult shorten_curve(const PLCurve& alpha, const ShorteningParams& params) {
  params.validate();
  const ManifoldPtr& M = alpha.manifold_ptr();
  const Point p = alpha.front();
  const double L = alpha.length();
  const double l = params.l, a = params.a;
  ShorteningResult r;
  r.predicted_steps = L > l + a ? evaluate(Formula::step_count, {{"L", L}, {"l", l}, {"a", a}, {"delta", params.step()}})
                                : 0.0;
  std::vector<FamilySpan> spans;
  PLCurve base = PLCurve::constant(M, p);
  double T = 0.0;
  double current = L;
  const std::size_t guard = static_cast<std::size_t>(r.predicted_steps) + 16;
  while (current > l + a) {
    if (r.steps > guard) throw IterationBudgetExceeded("shorten_curve: no progress");
    const double room = current - l - a;
    const bool last = room <= params.step();
    const double cut = l + a + (last ? room : params.step());
    const double T1 = last ? L : std::min(L, T + (cut - base.length()));

    FamilySpan mv;
    mv.moving = {base, T, T1, pieces(T1 - T, kFrameStep)};
    const PLCurve head = T1 == T ? base : concat(base, subcurve(alpha, T, T1));
    const PLCurve edge = PLCurve::geodesic(M, p, head.back());
    const PLCurve loop = concat(head, reverse(edge));
    ShorteningTrace trace = shorten_based_loop(LoopAt::from(loop), params.birkhoff);
    const double lim = trace.limit.length();
    if (lim > l) {
      std::ostringstream os;
      os << "index-zero loop of length " << lim << " outside [0, " << l << "] at alpha(" << T1 << ")";
      if (!trace.converged) throw IterationBudgetExceeded("loop shortening did not converge: " + os.str());
      throw HypothesisViolated(os.str(), trace.limit, lim);
    }
    r.loops.push_back({T1, loop.length(), lim, trace.converged});

    FamilySpan fz;
    fz.frozen = true;
    fz.fixed.t = T1;
    fz.fixed.head = head;
    fz.fixed.head_length = head.length();
    fz.fixed.edge = edge;
    fz.fixed.xs = doubling_positions(edge.length());
    fz.fixed.stages = std::move(trace.stages);
    spans.push_back(std::move(mv));
    spans.push_back(std::move(fz));

    base = concat(trace.limit.is_constant() ? PLCurve::constant(M, p) : trace.limit, edge);
    T = T1;
    current = base.length() + (L - T);
    ++r.steps;
  }
  r.vacuous = r.steps == 0;
  if (T < L || spans.empty()) {
    FamilySpan mv;
    mv.moving = {base, T, L, L > T ? pieces(L - T, kFrameStep) : 1};
    const PLCurve head = L > T ? concat(base, subcurve(alpha, T, L)) : base;
    spans.push_back(std::move(mv));
    spans.push_back(trivial_frozen(r.vacuous ? alpha : head, L));
  }
  r.family = ShorteningFamily(alpha, std::move(spans));
  r.final = r.family.final_curve();
  return r;
}

PLCurve partial_frame(const ShorteningFamily& fam, std::size_t i) {
  const PLCurve f = fam.frame(i);
  const double t = fam.tau(i);
  const double L = fam.alpha().length();
  if (t >= L) return f;
  return concat(f, subcurve(fam.alpha(), t, L));
}

PLCurve partial_shortening(const ShorteningFamily& fam, double s) {
  const std::size_t n = fam.frame_count();
  if (s <= 0.0) return fam.alpha().is_constant() ? fam.alpha() : partial_frame(fam, 0);
  if (s >= 1.0 || n == 1) return fam.final_curve();
  const double x = s * static_cast<double>(n - 1);
  const std::size_t i = static_cast<std::size_t>(std::floor(x));
  const FamilySpan& sp = fam.spans()[fam.span_of(i)];
  if (!sp.frozen && i + 1 < sp.first + sp.frames) {
    const double t0 = fam.tau(i), t1 = fam.tau(i + 1);
    const double t = t0 + (x - static_cast<double>(i)) * (t1 - t0);
    const PLCurve g = t == sp.moving.t0 ? sp.moving.base : concat(sp.moving.base, subcurve(fam.alpha(), sp.moving.t0, t));
    const double L = fam.alpha().length();
    return t >= L ? g : concat(g, subcurve(fam.alpha(), t, L));
  }
  return partial_frame(fam, i);
}

LengthHomotopy family_homotopy(const ShorteningFamily& fam, double slack) {
  LengthHomotopy h;
  h.start_point = fam.alpha().front();
  h.end_point = fam.alpha().back();
  h.slack = slack;
  for (std::size_t i = 0; i < fam.frame_count(); ++i) {
    PLCurve f = partial_frame(fam, i);
    if (i == 0 && fam.spans().size() == 2 && fam.spans()[1].fixed.trivial) {
      h.frames = {fam.alpha()};
      break;
    }
    if (!h.frames.empty() && same_points(h.frames.back(), f)) continue;
    h.frames.push_back(std::move(f));
  }
  h.certified_bound = h.frames.front().length();
  for (const PLCurve& f : h.frames) h.certified_bound = std::max(h.certified_bound, f.length());
  return h;
}

bool FamilyCheck::pass() const {
  if (!(tau_monotone && frozen_endpoints && moving_spans && last_is_final && partitions && loops_ok && even_points))
    return false;
  for (const BoundCertificate& c : certs)
    if (!c.pass) return false;
  return true;
}

FamilyCheck check_family(const ShorteningResult& r, const ShorteningParams& params, double slack) {
  FamilyCheck out;
  const ShorteningFamily& fam = r.family;
  const PLCurve& alpha = fam.alpha();
  const Manifold& M = alpha.manifold();
  const double L = alpha.length();
  const double L0 = remeasure(alpha);
  const Point& p = alpha.front();
  double prev_tau = -1.0;
  for (std::size_t i = 0; i < fam.frame_count(); ++i) {
    const PLCurve f = fam.frame(i);
    const double t = fam.tau(i);
    const double len = remeasure(f);
    out.max_gamma = std::max(out.max_gamma, len);
    if (f.front() != p) out.frozen_endpoints = false;
    if (t < prev_tau) out.tau_monotone = false;
    prev_tau = t;
    const double tail = t >= L ? 0.0 : remeasure(subcurve(alpha, t, L));
    out.max_homotopy = std::max(out.max_homotopy, len + tail);
    if (M.segment_length(f.back(), alpha.point_at(t)) > 1e-9) out.moving_spans = false;
  }
  const auto& spans = fam.spans();
  for (std::size_t k = 0; k < spans.size(); ++k) {
    const FamilySpan& s = spans[k];
    if ((k % 2 == 1) != s.frozen) out.partitions = false;
    if (s.frozen) {
      const Point q = fam.frame(s.first).back();
      for (std::size_t i = s.first; i < s.first + s.frames; ++i)
        if (fam.frame(i).back() != q) out.frozen_endpoints = false;
    } else {
      for (std::size_t i = s.first + 1; i < s.first + s.frames; ++i)
        if (!(fam.tau(i) > fam.tau(i - 1))) out.moving_spans = false;
      if (fam.tau(s.first) != s.moving.t0 || fam.tau(s.first + s.frames - 1) != s.moving.t1) out.moving_spans = false;
      out.max_even_point = std::max(out.max_even_point, remeasure(fam.frame(s.first)));
    }
  }
  const auto P = fam.P();
  const auto Q = fam.Q();
  if (Q.size() != 2 * P.size() - 1 || P.front() != 0.0 || P.back() != L || Q.front() != 0.0 || Q.back() != 1.0)
    out.partitions = false;
  for (std::size_t k = 1; k < P.size(); ++k)
    if (!(P[k] > P[k - 1]) && L > 0.0) out.partitions = false;
  out.even_points = out.max_even_point <= params.l + params.a + slack || r.vacuous;
  for (std::size_t k = 1; k < Q.size(); ++k)
    if (!(Q[k] > Q[k - 1])) out.partitions = false;

  out.last_is_final = same_points(fam.frame(fam.frame_count() - 1), r.final);
  out.final_length = remeasure(r.final);
  for (const SplicedLoop& lp : r.loops)
    if (lp.limit_length > params.l || lp.loop_length > params.l + 2 * params.a + params.delta + slack)
      out.loops_ok = false;

  const Params sym = params.symbols(L0);
  out.certs.push_back(make_certificate(Formula::l_plus_a, sym, out.final_length, slack));
  out.certs.push_back(make_certificate(Formula::L_plus_2a, sym, out.max_homotopy, slack));
  out.certs.push_back(make_certificate(Formula::l_plus_3a_delta, sym, out.max_gamma, slack));
  if (L0 > params.l + params.a) {
    Params steps = sym;
    steps["delta"] = params.step();
    out.certs.push_back(make_certificate(Formula::step_count, steps, static_cast<double>(r.steps), 1.0));
  }
  return out;
}

}  // namespace geoloop
