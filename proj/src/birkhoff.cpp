#include "geoloop/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace geoloop {

namespace {

// Working polygon. Based: x.front() == x.back() == basepoint. Free: cyclic, no closing duplicate.
struct Polygon {
  const Manifold& M;
  bool based;
  std::vector<Point> x;
  std::vector<double> disp;

  std::size_t n() const { return x.size(); }
  bool collapsed() const { return based ? n() <= 2 : n() <= 1; }

  double length() const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n(); ++i) s += M.segment_length(x[i], x[i + 1]);
    if (!based && n() > 1) s += M.segment_length(x.back(), x.front());
    return s;
  }

  void move(std::size_t i, const Point& prev, const Point& next) {
    Point y = M.interpolate(prev, next, 0.5);
    disp[i] += M.segment_length(x[i], y);
    x[i] = std::move(y);
  }

  void sweep() {
    const std::size_t m = n();
    if (based) {
      for (std::size_t parity = 1; parity <= 2; ++parity)
        for (std::size_t i = parity; i + 1 < m; i += 2) move(i, x[i - 1], x[i + 1]);
      return;
    }
    if (m < 2) return;
    for (std::size_t parity = 1; parity <= 2; ++parity)
      for (std::size_t i = parity % 2; i < m; i += 2) move(i, x[(i + m - 1) % m], x[(i + 1) % m]);
  }

  void coarsen(double gap) {
    if (!based) x.push_back(x.front()), disp.push_back(disp.front());
    const std::size_t m = n();
    std::vector<Point> out;
    std::vector<double> dout;
    out.reserve(m);
    dout.reserve(m);
    out.push_back(x[0]);
    dout.push_back(disp[0]);
    std::size_t i = 1;
    while (i + 1 < m) {
      if (M.segment_length(out.back(), x[i + 1]) <= gap) {
        const double carry = disp[i] + M.segment_length(x[i], x[i + 1]);
        out.push_back(x[i + 1]);
        dout.push_back(std::max(disp[i + 1], carry));
        i += 2;
      } else {
        out.push_back(x[i]);
        dout.push_back(disp[i]);
        i += 1;
      }
    }
    if (i == m - 1) {
      out.push_back(x[m - 1]);
      dout.push_back(disp[m - 1]);
    }
    x = std::move(out);
    disp = std::move(dout);
    if (!based) {
      disp.front() = std::max(disp.front(), disp.back());
      x.pop_back();
      disp.pop_back();
    }
  }

  double max_disp() const { return disp.empty() ? 0.0 : *std::max_element(disp.begin(), disp.end()); }
  void reset_disp() { std::fill(disp.begin(), disp.end(), 0.0); }

  PLCurve curve(const ManifoldPtr& m) const {
    std::vector<Point> pts = x;
    if (!based && !pts.empty()) pts.push_back(pts.front());
    if (based && collapsed()) pts.resize(1);
    return PLCurve(m, std::move(pts));
  }

  // Arclength positions of x[i].
  std::vector<double> positions() const {
    std::vector<double> s(n(), 0.0);
    for (std::size_t i = 1; i < n(); ++i) s[i] = s[i - 1] + M.segment_length(x[i - 1], x[i]);
    return s;
  }

  Vec curve_tangent(std::size_t i) const {
    const std::size_t m = n();
    const Point& a = based ? x[i - 1] : x[(i + m - 1) % m];
    const Point& b = based ? x[i + 1] : x[(i + 1) % m];
    Vec t = M.log(x[i], b) - M.log(x[i], a);
    const double nt = M.norm(x[i], t);
    return nt > 0.0 ? Vec(t / nt) : t;
  }

  // Smooth normal perturbations; accepted only when they shorten the loop.
  bool escape(double len, const BirkhoffOptions& opt) {
    const std::size_t m = n();
    const std::size_t first = based ? 1 : 0;
    const std::size_t last = based ? m - 1 : m;
    if (last <= first + 1) return false;
    const std::vector<double> s = positions();
    const double L = based ? s.back() : s.back() + M.segment_length(x.back(), x.front());
    if (!(L > 0.0)) return false;

    const Vec t0 = curve_tangent(first);
    std::vector<Vec> seeds;
    for (const Vec& b : M.tangent_basis(x[first])) {
      Vec w = b - M.inner(x[first], b, t0) * t0;
      for (const Vec& u : seeds) w -= M.inner(x[first], w, u) * u;
      const double nw = M.norm(x[first], w);
      if (nw > 0.3) seeds.push_back(w / nw);
    }

    double best = len - opt.tol;
    std::vector<Point> best_x;
    for (const Vec& seed : seeds) {
      std::vector<Vec> normal(m);
      Vec prev = seed;
      for (std::size_t i = first; i < last; ++i) {
        const Vec t = curve_tangent(i);
        Vec w = M.project_tangent(x[i], prev);
        w -= M.inner(x[i], w, t) * t;
        const double nw = M.norm(x[i], w);
        if (nw < 1e-9) return false;
        normal[i] = w / nw;
        prev = normal[i];
      }
      for (int k = 1; k <= 4; ++k) {
        for (double sign : {1.0, -1.0}) {
          std::vector<Point> y = x;
          for (std::size_t i = first; i < last; ++i) {
            const double phase = based ? k * std::numbers::pi * s[i] / L : 2.0 * k * std::numbers::pi * s[i] / L;
            const double amp = sign * opt.escape_amplitude * std::sin(phase);
            y[i] = M.exp(x[i], amp * normal[i]);
          }
          Polygon trial{M, based, y, {}};
          const double l = trial.length();
          if (l < best) {
            best = l;
            best_x = std::move(y);
          }
        }
      }
    }
    if (best_x.empty()) return false;
    for (std::size_t i = 0; i < m; ++i) disp[i] += M.segment_length(x[i], best_x[i]);
    x = std::move(best_x);
    return true;
  }
};

ShorteningTrace run(const PLCurve& start, bool based, const BirkhoffOptions& opt) {
  ShorteningTrace trace;
  if (based) trace.basepoint = start.front();
  trace.stages.push_back(start);
  if (start.is_constant() || start.length() == 0.0) {
    trace.limit = start.is_constant() ? start : PLCurve::constant(start.manifold_ptr(), start.front());
    trace.converged = true;
    return trace;
  }
  const ManifoldPtr& mp = start.manifold_ptr();
  Polygon P{*mp, based, refine(start, opt.max_gap).points(), {}};
  if (!based) P.x.pop_back();
  P.disp.assign(P.n(), 0.0);
  const bool escape_on = opt.escape.value_or(based);
  double len = P.length();
  for (std::size_t it = 1; it <= opt.max_sweeps; ++it) {
    P.sweep();
    P.coarsen(opt.coarsen_gap);
    const double nl = P.length();
    const double dec = len - nl;
    len = nl;
    trace.iterations = it;
    if (P.collapsed()) {
      trace.converged = true;
      break;
    }
    if (opt.record && P.max_disp() >= opt.record_spacing) {
      trace.stages.push_back(P.curve(mp));
      P.reset_disp();
    }
    if (dec < opt.tol) {
      if (escape_on && len > opt.coarsen_gap && trace.escapes < opt.max_escapes && P.escape(len, opt)) {
        ++trace.escapes;
        len = P.length();
        continue;
      }
      trace.converged = true;
      break;
    }
  }
  trace.limit = P.curve(mp);
  if (based && trace.limit.is_constant()) trace.limit = PLCurve::constant(mp, start.front());
  if (!same_points(trace.stages.back(), trace.limit)) trace.stages.push_back(trace.limit);
  return trace;
}

}  // namespace

std::vector<double> ShorteningTrace::stage_lengths() const {
  std::vector<double> out;
  out.reserve(stages.size());
  for (const PLCurve& c : stages) out.push_back(c.length());
  return out;
}

ShorteningTrace shorten_based_loop(const LoopAt& loop, const BirkhoffOptions& opt) {
  if (!loop.curve.is_closed()) throw EndpointMismatch("based loop is not closed");
  return run(loop.curve, true, opt);
}

ShorteningTrace shorten_free_loop(const PLCurve& loop, const BirkhoffOptions& opt) {
  if (!loop.is_closed()) throw EndpointMismatch("free loop is not closed");
  return run(loop, false, opt);
}

double geodesic_residual(const PLCurve& c, bool closed) {
  const auto& x = c.points();
  const Manifold& M = c.manifold();
  const std::size_t n = x.size();
  if (n < 3) return 0.0;
  double worst = 0.0;
  auto check = [&](const Point& a, const Point& p, const Point& b) {
    const double d1 = M.segment_length(a, p);
    const double d2 = M.segment_length(p, b);
    if (d1 + d2 == 0.0) return;
    const Point m = M.interpolate(a, b, d1 / (d1 + d2));
    worst = std::max(worst, M.segment_length(p, m));
  };
  for (std::size_t i = 1; i + 1 < n; ++i) check(x[i - 1], x[i], x[i + 1]);
  if (closed && n > 3) check(x[n - 2], x[0], x[1]);
  return worst;
}

double probe_local_minimality(const PLCurve& limit, bool based, int samples, double magnitude,
                              std::uint64_t seed) {
  const auto& x = limit.points();
  const Manifold& M = limit.manifold();
  const std::size_t n = x.size();
  if (n < 3) return 0.0;
  std::mt19937_64 rng(seed);
  const std::size_t lo = based ? 1 : 0;
  const std::size_t hi = n - 2;
  std::uniform_int_distribution<std::size_t> pick(lo, hi);
  std::normal_distribution<double> nd;
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const std::size_t i = pick(rng);
    const Point& a = i == 0 ? x[n - 2] : x[i - 1];
    const Point& b = x[i + 1];
    Vec v = Vec::Zero(M.coord_dim());
    for (const Vec& e : M.tangent_basis(x[i])) v += nd(rng) * e;
    const double nv = M.norm(x[i], v);
    if (nv == 0.0) continue;
    const Point y = M.exp(x[i], v * (magnitude / nv));
    const double before = M.segment_length(a, x[i]) + M.segment_length(x[i], b);
    const double after = M.segment_length(a, y) + M.segment_length(y, b);
    worst = std::min(worst, after - before);
  }
  return std::isfinite(worst) ? worst : 0.0;
}

double sweep_delta(const PLCurve& limit, bool based) {
  if (limit.is_constant()) return 0.0;
  Polygon P{limit.manifold(), based, limit.points(), {}};
  if (!based) P.x.pop_back();
  P.disp.assign(P.n(), 0.0);
  const double before = P.length();
  P.sweep();
  return before - P.length();
}

}  // namespace geoloop
