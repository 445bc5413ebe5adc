#include "geoloop/sweepout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace geoloop {

namespace {

constexpr double pi = std::numbers::pi;
// Re-summed lengths of an unchanged member may differ in the last bits.
constexpr double kRoundoff = 1e-12;

struct Member {
  std::vector<Point> x;
  double length = 0.0;
};

double cyclic_length(const Manifold& M, const std::vector<Point>& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += M.segment_length(x[i], x[(i + 1) % x.size()]);
  return s;
}

void sweep(const Manifold& M, std::vector<Point>& x) {
  const std::size_t m = x.size();
  for (std::size_t parity = 1; parity <= 2; ++parity)
    for (std::size_t i = parity % 2; i < m; i += 2) x[i] = M.interpolate(x[(i + m - 1) % m], x[(i + 1) % m], 0.5);
}

Member resample(const PLCurve& c, std::size_t K) {
  Member out;
  const double len = c.length();
  for (std::size_t j = 0; j < K; ++j) out.x.push_back(c.point_at(len * static_cast<double>(j) / K));
  out.length = cyclic_length(c.manifold(), out.x);
  return out;
}

Member interpolate(const Manifold& M, const Member& a, const Member& b, double w) {
  Member out;
  for (std::size_t j = 0; j < a.x.size(); ++j) out.x.push_back(M.interpolate(a.x[j], b.x[j], w));
  out.length = cyclic_length(M, out.x);
  return out;
}

struct Fate {
  bool collapsed = false;
  Point where;
};

Fate fate(const Manifold& M, Member a, double below, std::size_t budget) {
  for (std::size_t s = 0; s < budget && a.length >= below; ++s) {
    sweep(M, a.x);
    a.length = cyclic_length(M, a.x);
  }
  return {a.length < below, a.x.front()};
}

PLCurve to_curve(const ManifoldPtr& m, const Member& a) {
  std::vector<Point> pts = a.x;
  pts.push_back(pts.front());
  return PLCurve(m, std::move(pts));
}

}  // namespace

MinimaxResult minimax_geodesic(const std::vector<PLCurve>& family, const MinimaxOptions& opt) {
  if (family.empty()) throw ConfigError("minimax: empty family");
  if (opt.points < 4) throw ConfigError("minimax: too few points per member");
  const ManifoldPtr& mp = family.front().manifold_ptr();
  const Manifold& M = *mp;
  std::vector<Member> members;
  for (const PLCurve& c : family) {
    if (!c.is_closed()) throw EndpointMismatch("minimax: family member is not closed");
    members.push_back(resample(c, opt.points));
  }
  MinimaxResult r;
  for (const Member& a : members) r.initial_max = std::max(r.initial_max, a.length);
  const double below = opt.collapse_fraction * r.initial_max;

  std::vector<Fate> fates;
  for (const Member& a : members) fates.push_back(fate(M, a, below, opt.collapse_budget));
  const std::size_t n = members.size();
  for (std::size_t i = 0; i < n && n > 1; ++i) {
    const std::size_t j = (i + 1) % n;
    if (!fates[i].collapsed || !fates[j].collapsed) continue;
    if (M.distance(fates[i].where, fates[j].where) <= opt.split_distance) continue;
    ++r.brackets;
    Member lo = members[i], hi = members[j];
    Fate flo = fates[i], fhi = fates[j];
    for (int k = 0; k < opt.bisections; ++k) {
      Member mid = interpolate(M, lo, hi, 0.5);
      const Fate fm = fate(M, mid, below, opt.collapse_budget);
      if (!fm.collapsed) {
        members.push_back(std::move(mid));
        break;
      }
      const double dl = M.distance(flo.where, fm.where), dh = M.distance(fm.where, fhi.where);
      if (std::max(dl, dh) <= opt.split_distance) break;
      if (dl >= dh) {
        hi = std::move(mid);
        fhi = fm;
      } else {
        lo = std::move(mid);
        flo = fm;
      }
      if (k + 1 == opt.bisections) {
        members.push_back(lo);
        members.push_back(hi);
      }
    }
  }
  r.refined = members.size() - n;

  double mx = 0.0;
  for (const Member& a : members) mx = std::max(mx, a.length);
  r.stage_max.push_back(mx);
  for (std::size_t s = 1; s <= opt.max_sweeps; ++s) {
    const double floor_len = opt.active_fraction * mx;
    double now = 0.0;
    for (Member& a : members) {
      if (a.length >= floor_len) {
        sweep(M, a.x);
        a.length = cyclic_length(M, a.x);
      }
      now = std::max(now, a.length);
    }
    if (now > mx * (1.0 + kRoundoff)) r.monotone = false;
    mx = now;
    r.stage_max.push_back(mx);
    r.sweeps = s;
    if (mx < opt.degenerate_length) {
      r.degenerate = true;
      break;
    }
    if (s >= opt.window && r.stage_max[s - opt.window] - mx <= opt.tol * mx) {
      r.stagnated = true;
      break;
    }
  }
  r.members = members.size();
  const Member* best = &members.front();
  for (const Member& a : members)
    if (a.length > best->length) best = &a;
  r.critical_loop = to_curve(mp, *best);
  r.minimax_length = r.degenerate ? 0.0 : remeasure(r.critical_loop);
  r.geodesic_residual = geodesic_residual(r.critical_loop, true);
  const Params sym{{"m", static_cast<double>(opt.q)}};
  r.bound = make_certificate(Formula::eight_pi_m, sym, r.minimax_length, opt.slack(sym));
  return r;
}

std::vector<PLCurve> sweepout_members(const LoopFamily& f, const ShorteningParams& params, double spacing,
                                      double slack) {
  std::vector<PLCurve> out;
  for (std::size_t g = 0; g < f.gaps(); ++g) {
    const std::vector<PLCurve> frames = shortened_gap_frames(f, params, g, slack);
    for (std::size_t i = 0; i < frames.size(); ++i) {
      if (g + 1 == f.gaps() && i + 1 == frames.size()) break;
      if (out.empty() || i + 1 == frames.size() || frame_displacement(out.back(), frames[i]) >= spacing)
        out.push_back(frames[i]);
    }
  }
  return out;
}

double bound_formula(double k, int m, double a) {
  return evaluate(Formula::general_bound, {{"k", k}, {"m", static_cast<double>(m)}, {"a", a}});
}

double loop_count_bound(int n, int k, CountKind kind) {
  if (n < 2 || k < 1) throw ConfigError("loop_count_bound needs n >= 2 and k >= 1");
  const double c = 16.0 * k * (n - 1);
  return kind == CountKind::loops ? pi * c : pi * (c + 1.0);
}

RemarkChain remark_chain(int q, double d) {
  RemarkChain c;
  c.k = pi / (2.0 * d) + 1.0;
  c.formula = bound_formula(c.k, q, d);
  c.expanded = ((2.0 * pi / d + 6.0) * q + (pi / d - 1.0)) * d;
  c.relaxed = 8.0 * pi * q + pi - d;
  c.coarse = 9.0 * pi * q;
  return c;
}

}  // namespace geoloop
