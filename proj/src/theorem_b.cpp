#include "geoloop/theorem_b.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <thread>

namespace geoloop {

namespace {

double frac(double tau, double L) { return L > 0.0 ? tau / L : 1.0; }

void push_distinct(std::vector<PLCurve>& out, PLCurve c) {
  if (!out.empty() && same_points(out.back(), c)) return;
  out.push_back(std::move(c));
}

PLCurve interpolate_loops(const PLCurve& a, const PLCurve& b, double w) {
  const Manifold& M = a.manifold();
  std::vector<double> us;
  for (double c : a.cumulative()) us.push_back(frac(c, a.length()));
  for (double c : b.cumulative()) us.push_back(frac(c, b.length()));
  std::sort(us.begin(), us.end());
  us.erase(std::unique(us.begin(), us.end()), us.end());
  std::vector<Point> pts;
  for (double u : us) pts.push_back(M.interpolate(a.point_at(u * a.length()), b.point_at(u * b.length()), w));
  pts.front() = a.front();
  pts.back() = a.front();
  PLCurve c(a.manifold_ptr(), std::move(pts));
  return max_segment(c) > kDefaultGap ? refine(c, kDefaultGap) : c;
}

std::size_t moving_frame(const ShorteningFamily& F, std::size_t k, double tau) {
  const FamilySpan& s = F.spans()[k];
  const std::size_t last = s.first + s.frames - 1;
  const double span = s.moving.t1 - s.moving.t0;
  std::size_t j = s.first;
  if (span > 0.0)
    j += static_cast<std::size_t>(std::clamp((tau - s.moving.t0) / span * s.moving.segments, 0.0,
                                             static_cast<double>(s.moving.segments)));
  j = std::min(j, last);
  while (j > s.first && F.tau(j) > tau) --j;
  while (j < last && F.tau(j + 1) <= tau) ++j;
  return j;
}

SideState moving_state(const ShorteningFamily& F, std::size_t k, double tau) {
  const FamilySpan& s = F.spans()[k];
  tau = std::clamp(tau, s.moving.t0, s.moving.t1);
  return {moving_frame(F, k, tau), tau};
}

// Everything about one gap that the certificates need.
struct Gap {
  const ShorteningFamily* F[2];
  double L[2];
  std::vector<SyncStep> sync;
  std::vector<double> g[2];
  std::vector<double> v;
  std::vector<double> prefix;
  std::vector<double> rung_u;
  std::vector<double> rung_v;
  // Suffix maxima of u (L_O - L_D) + |v| with O = side index.
  std::vector<double> suffix[2];

  Gap(const ShorteningFamily& A, const ShorteningFamily& B, bool b_first) : F{&A, &B} {
    L[0] = A.alpha().length();
    L[1] = B.alpha().length();
    sync = synchronize(A, B, b_first);
    const Manifold& M = A.alpha().manifold();
    const std::size_t n = sync.size();
    for (int s = 0; s < 2; ++s) g[s].resize(n);
    v.resize(n);
    prefix.resize(n);
    double run = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      for (int s = 0; s < 2; ++s) g[s][m] = sync_gamma_length(*F[s], sync[m].side[s]);
      if (m > 0 && sync[m].side[0].tau == sync[m - 1].side[0].tau && sync[m].side[1].tau == sync[m - 1].side[1].tau)
        v[m] = v[m - 1];
      else
        v[m] = M.distance(A.alpha().point_at(sync[m].side[0].tau), B.alpha().point_at(sync[m].side[1].tau));
      run = std::max(run, g[0][m] + v[m] + g[1][m]);
      prefix[m] = run;
    }
    const int R = std::max(1, static_cast<int>(std::ceil(std::max(L[0], L[1]) / kFrameStep)));
    for (int j = 0; j <= R; ++j) {
      const double u = static_cast<double>(j) / R;
      rung_u.push_back(u);
      rung_v.push_back(j == R ? 0.0 : M.distance(A.alpha().point_at(u * L[0]), B.alpha().point_at(u * L[1])));
    }
    for (int o = 0; o < 2; ++o) {
      suffix[o].assign(rung_u.size() + 1, -std::numeric_limits<double>::infinity());
      for (std::size_t j = rung_u.size(); j-- > 0;)
        suffix[o][j] = std::max(suffix[o][j + 1], rung_u[j] * (L[o] - L[1 - o]) + rung_v[j]);
    }
  }

  std::size_t states() const { return sync.size(); }
  const ShorteningFamily& fam(int s) const { return *F[s]; }

  int doubled(std::size_t m) const {
    if (sync[m].runner >= 0) return 1 - sync[m].runner;
    return g[0][m] < g[1][m] ? 0 : 1;
  }

  std::size_t first_rung(std::size_t m) const {
    const double u0 = std::max(frac(sync[m].side[0].tau, L[0]), frac(sync[m].side[1].tau, L[1]));
    return static_cast<std::size_t>(std::upper_bound(rung_u.begin(), rung_u.end(), u0) - rung_u.begin());
  }

  double deformation_max(std::size_t m) const {
    const int D = doubled(m), O = 1 - D;
    const double tauO = sync[m].side[O].tau, tauD = sync[m].side[D].tau;
    double best = prefix[m] + g[D][m] + (L[D] - tauD);
    const std::size_t j0 = first_rung(m);
    if (j0 < rung_u.size()) best = std::max(best, g[O][m] - tauO + L[D] + suffix[O][j0]);
    return best;
  }

  PLCurve gamma(int s, std::size_t m) const { return sync_gamma(*F[s], sync[m].side[s]); }

  // gamma^O * v * rev(gamma^D) at state j.
  PLCurve contraction(std::size_t j, int O) const {
    const PLCurve go = gamma(O, j), gd = gamma(1 - O, j);
    const PLCurve v = PLCurve::geodesic(go.manifold_ptr(), go.back(), gd.back());
    const PLCurve r = reverse(gd);
    return concat({&go, &v, &r});
  }

  // Contraction of the state-m loop back to the constant loop, side O first.
  LengthHomotopy prefix_homotopy(std::size_t m, int O, double bound, double slack) const {
    LengthHomotopy H;
    H.start_point = fam(0).alpha().front();
    H.end_point = H.start_point;
    H.certified_bound = bound;
    H.slack = slack;
    for (std::size_t j = m + 1; j-- > 0;) push_distinct(H.frames, contraction(j, O));
    return H;
  }

  // Shortened family across the gap, oriented A -> B.
  std::vector<PLCurve> tilde(double bound, double slack) const {
    const std::size_t last = states() - 1;
    const int D = doubled(last);
    const LengthHomotopy H = prefix_homotopy(last, 1 - D, bound, slack);
    LengthHomotopy T = lemma_path_homotopy(fam(1 - D).final_curve(), fam(D).final_curve(), H, slack);
    if (D == 0) std::reverse(T.frames.begin(), T.frames.end());
    return std::move(T.frames);
  }

  // Ladder from the partial shortening of O down to gamma^O * v * tail_D, then the lemma on the doubled side.
  std::vector<PLCurve> deformation(std::size_t m, double slack) const {
    const int D = doubled(m), O = 1 - D;
    const PLCurve& aO = fam(O).alpha();
    const PLCurve& aD = fam(D).alpha();
    const double tauO = sync[m].side[O].tau, tauD = sync[m].side[D].tau;
    const PLCurve gO = gamma(O, m), gD = gamma(D, m);
    const ManifoldPtr& M = aO.manifold_ptr();
    const PLCurve tailD = subcurve(aD, tauD, L[D]);
    std::vector<PLCurve> out;
    for (std::size_t j = rung_u.size(); j-- > first_rung(m);) {
      const bool top = j + 1 == rung_u.size();
      const double xO = top ? L[O] : std::max(tauO, rung_u[j] * L[O]);
      const double xD = top ? L[D] : std::max(tauD, rung_u[j] * L[D]);
      const PLCurve up = subcurve(aO, tauO, xO);
      const PLCurve v = PLCurve::geodesic(M, up.back(), aD.point_at(xD));
      const PLCurve down = subcurve(aD, xD, L[D]);
      push_distinct(out, concat({&gO, &up, &v, &down}));
    }
    const PLCurve v = PLCurve::geodesic(M, gO.back(), gD.back());
    const LengthHomotopy H = prefix_homotopy(m, O, std::numeric_limits<double>::infinity(), slack);
    for (const PLCurve& fr : lemma_path_homotopy(concat(gO, v), gD, H, slack).frames)
      push_distinct(out, concat(fr, tailD));
    if (O == 1) std::reverse(out.begin(), out.end());
    return out;
  }
};

GapSummary process_gap(const Gap& G, std::size_t gap, double bound, double slack) {
  GapSummary out;
  out.gap = gap;
  out.states = G.states();
  const Point& p = G.fam(0).alpha().front();
  std::vector<PLCurve> C;
  C.reserve(G.states());
  for (std::size_t m = 0; m < G.states(); ++m) {
    out.max_contraction = std::max(out.max_contraction, G.g[0][m] + G.v[m] + G.g[1][m]);
    out.max_short_side = std::max(out.max_short_side, std::min(G.g[0][m], G.g[1][m]));
    out.max_vertical = std::max(out.max_vertical, G.v[m]);
    const double d = G.deformation_max(m);
    if (d > out.max_deformation) {
      out.max_deformation = d;
      out.argmax_deformation = m;
    }
    PLCurve c = G.contraction(m, 0);
    out.max_contraction_measured = std::max(out.max_contraction_measured, remeasure(c));
    if (c.front() != p || c.back() != p) out.based = false;
    C.push_back(std::move(c));
  }
  const std::size_t last = G.states() - 1;
  const int D = G.doubled(last);
  out.doubled_b = D == 1;
  LengthHomotopy H;
  H.start_point = p;
  H.end_point = p;
  H.certified_bound = bound;
  H.slack = slack;
  for (std::size_t j = C.size(); j-- > 0;) push_distinct(H.frames, D == 1 ? C[j] : reverse(C[j]));
  C.clear();
  const PLCurve bO = G.fam(1 - D).final_curve(), bD = G.fam(D).final_curve();
  const LengthHomotopy T = lemma_path_homotopy(bO, bD, H, slack);
  out.tilde_frames = T.frames.size();
  for (const PLCurve& f : T.frames) {
    out.max_tilde_measured = std::max(out.max_tilde_measured, remeasure(f));
    if (f.front() != p || f.back() != p) out.based = false;
  }
  return out;
}

ShorteningResult node_run(const LoopFamily& f, std::size_t i, const ShorteningParams& params) {
  return shorten_curve(f.loops[i], params);
}

Params family_symbols(const ShorteningParams& params, double epsilon, double L) {
  Params p = params.symbols(L);
  p["epsilon"] = epsilon;
  return p;
}

}  // namespace

double LoopFamily::max_length() const {
  double m = 0.0;
  for (const PLCurve& c : loops) m = std::max(m, c.length());
  return m;
}

void LoopFamily::validate() const {
  if (loops.size() < 2 || t.size() != loops.size()) throw ConfigError("loop family needs at least two nodes");
  if (t.front() != 0.0 || t.back() != 1.0) throw ConfigError("loop family nodes must run from 0 to 1");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw ConfigError("loop family nodes must increase");
  for (const PLCurve& c : loops)
    if (c.front() != basepoint || c.back() != basepoint) throw ConfigError("loop family member is not based at p");
  if (!same_points(loops.front(), loops.back())) throw ConfigError("loop family is not closed");
}

LoopFamily make_family(const ManifoldPtr& m, std::function<PLCurve(double)> f, std::size_t gaps) {
  if (gaps == 0) throw ConfigError("loop family needs at least one gap");
  LoopFamily out;
  out.manifold = m;
  for (std::size_t i = 0; i <= gaps; ++i) {
    const double t = i == gaps ? 1.0 : static_cast<double>(i) / gaps;
    out.t.push_back(t);
    out.loops.push_back(i == gaps ? out.loops.front() : f(t));
  }
  out.basepoint = out.loops.front().front();
  out.generator = std::move(f);
  out.validate();
  return out;
}

PLCurve vertical_track(const PLCurve& a, const PLCurve& b, double u) {
  return PLCurve::geodesic(a.manifold_ptr(), a.point_at(u * a.length()), b.point_at(u * b.length()));
}

double vertical_gap(const PLCurve& a, const PLCurve& b) {
  const Manifold& M = a.manifold();
  std::vector<double> us;
  for (double c : a.cumulative()) us.push_back(frac(c, a.length()));
  for (double c : b.cumulative()) us.push_back(frac(c, b.length()));
  std::sort(us.begin(), us.end());
  us.erase(std::unique(us.begin(), us.end()), us.end());
  const std::size_t n = us.size();
  for (std::size_t i = 0; i + 1 < n; ++i) us.push_back(0.5 * (us[i] + us[i + 1]));
  double d = 0.0;
  for (double u : us) d = std::max(d, M.distance(a.point_at(u * a.length()), b.point_at(u * b.length())));
  return d;
}

LoopFamily refine_to_epsilon(LoopFamily f, double epsilon, std::size_t max_nodes) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  f.validate();
  for (;;) {
    LoopFamily next = f;
    next.t = {f.t.front()};
    next.loops = {f.loops.front()};
    bool inserted = false;
    for (std::size_t i = 0; i + 1 < f.loops.size(); ++i) {
      const double d = vertical_gap(f.loops[i], f.loops[i + 1]);
      const int pieces = d > epsilon ? static_cast<int>(std::ceil(d / epsilon)) : 1;
      for (int k = 1; k < pieces; ++k) {
        const double w = static_cast<double>(k) / pieces;
        const double t = f.t[i] + w * (f.t[i + 1] - f.t[i]);
        next.t.push_back(t);
        next.loops.push_back(f.generator ? f.generator(t) : interpolate_loops(f.loops[i], f.loops[i + 1], w));
        inserted = true;
      }
      next.t.push_back(f.t[i + 1]);
      next.loops.push_back(f.loops[i + 1]);
      if (next.loops.size() > max_nodes) throw ConfigError("epsilon refinement exceeds the node budget");
    }
    f = std::move(next);
    if (!inserted) return f;
  }
}

PLCurve sync_gamma(const ShorteningFamily& F, const SideState& s) {
  if (s.tau == F.tau(s.frame)) return F.frame(s.frame);
  const FamilySpan& sp = F.spans()[F.span_of(s.frame)];
  if (sp.frozen) throw SyncFailed("sync state inside a frozen span");
  return concat(sp.moving.base, subcurve(F.alpha(), sp.moving.t0, s.tau));
}

double sync_gamma_length(const ShorteningFamily& F, const SideState& s) {
  if (s.tau == F.tau(s.frame)) return F.frame_length(s.frame);
  const FamilySpan& sp = F.spans()[F.span_of(s.frame)];
  if (sp.frozen) throw SyncFailed("sync state inside a frozen span");
  return sp.moving.base.length() + (s.tau - sp.moving.t0);
}

std::vector<SyncStep> synchronize(const ShorteningFamily& A, const ShorteningFamily& B, bool b_first) {
  const ShorteningFamily* F[2] = {&A, &B};
  const double L[2] = {A.alpha().length(), B.alpha().length()};
  std::size_t k[2] = {0, 0};
  bool done[2] = {false, false};
  SyncStep cur;
  std::vector<SyncStep> out{cur};
  const int order[2] = {b_first ? 1 : 0, b_first ? 0 : 1};

  while (!(done[0] && done[1])) {
    double end[2];
    for (int s = 0; s < 2; ++s) {
      if (!done[s] && F[s]->spans()[k[s]].frozen) throw SyncFailed("synchronize: expected a moving span");
      end[s] = done[s] ? std::numeric_limits<double>::infinity() : frac(F[s]->spans()[k[s]].moving.t1, L[s]);
    }
    const double target = std::min(end[0], end[1]);
    if (!std::isfinite(target)) throw SyncFailed("synchronize: sides end at different parameters");

    struct Mark {
      double u;
      int side;
      std::size_t frame;
    };
    std::vector<Mark> marks;
    for (int s = 0; s < 2; ++s) {
      if (done[s]) continue;
      const FamilySpan& sp = F[s]->spans()[k[s]];
      for (std::size_t i = sp.first; i < sp.first + sp.frames; ++i) {
        const double u = frac(F[s]->tau(i), L[s]);
        if (u > cur.u && u < target) marks.push_back({u, s, i});
      }
    }
    std::stable_sort(marks.begin(), marks.end(), [](const Mark& x, const Mark& y) { return x.u < y.u; });
    for (std::size_t i = 0; i < marks.size();) {
      const double u = marks[i].u;
      SyncStep st;
      st.u = u;
      bool exact[2] = {false, false};
      for (; i < marks.size() && marks[i].u == u; ++i) {
        st.side[marks[i].side] = {marks[i].frame, F[marks[i].side]->tau(marks[i].frame)};
        exact[marks[i].side] = true;
      }
      for (int s = 0; s < 2; ++s)
        if (!exact[s]) st.side[s] = done[s] ? cur.side[s] : moving_state(*F[s], k[s], u * L[s]);
      cur = st;
      out.push_back(cur);
    }

    SyncStep st;
    st.u = target;
    for (int s = 0; s < 2; ++s) {
      if (done[s]) {
        st.side[s] = cur.side[s];
      } else if (end[s] == target) {
        const FamilySpan& sp = F[s]->spans()[k[s]];
        st.side[s] = {sp.first + sp.frames - 1, sp.moving.t1};
      } else {
        st.side[s] = moving_state(*F[s], k[s], target * L[s]);
      }
    }
    cur = st;
    out.push_back(cur);

    for (int s : order) {
      if (done[s] || end[s] != target) continue;
      const FamilySpan& fz = F[s]->spans()[k[s] + 1];
      const std::size_t last = fz.first + fz.frames - 1;
      for (std::size_t i = fz.first + 1; i <= last; ++i) {
        cur.side[s] = {i, fz.fixed.t};
        cur.runner = i < last ? s : -1;
        out.push_back(cur);
      }
      cur.runner = -1;
      k[s] += 2;
      if (k[s] >= F[s]->spans().size()) done[s] = true;
    }
  }
  return out;
}

LengthHomotopy contract_adjacent(const ShorteningFamily& A, const ShorteningFamily& B, const std::vector<SyncStep>& sync,
                                 double bound, double slack) {
  const Point& p = A.alpha().front();
  if (B.alpha().front() != p) throw EndpointMismatch("contract_adjacent: families have different basepoints");
  LengthHomotopy H;
  H.start_point = p;
  H.end_point = p;
  H.certified_bound = bound;
  H.slack = slack;
  for (std::size_t j = sync.size(); j-- > 0;) {
    const PLCurve ga = sync_gamma(A, sync[j].side[0]), gb = sync_gamma(B, sync[j].side[1]);
    const PLCurve v = PLCurve::geodesic(ga.manifold_ptr(), ga.back(), gb.back());
    const PLCurve r = reverse(gb);
    push_distinct(H.frames, concat({&ga, &v, &r}));
  }
  if (H.max_length() > bound + slack) throw BoundViolation("contract_adjacent: frame exceeds the bound");
  return H;
}

unsigned worker_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GEOLOOP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

bool FamilyResult::pass() const {
  if (!(disjoint && based && start_matches && end_matches)) return false;
  for (const BoundCertificate& c : certs)
    if (!c.pass) return false;
  return true;
}

std::vector<PLCurve> shortened_gap_frames(const LoopFamily& f, const ShorteningParams& params, std::size_t gap,
                                          double slack) {
  if (gap >= f.gaps()) throw RangeError("shortened_gap_frames: gap out of range");
  const ShorteningResult A = node_run(f, gap, params), B = node_run(f, gap + 1, params);
  return Gap(A.family, B.family, gap + 2 == f.nodes()).tilde(std::numeric_limits<double>::infinity(), slack);
}

std::vector<PLCurve> contraction_frames(const LoopFamily& f, const ShorteningParams& params, std::size_t gap) {
  if (gap >= f.gaps()) throw RangeError("contraction_frames: gap out of range");
  const ShorteningResult A = node_run(f, gap, params), B = node_run(f, gap + 1, params);
  const Gap G(A.family, B.family, gap + 2 == f.nodes());
  std::vector<PLCurve> out;
  for (std::size_t m = 0; m < G.states(); ++m) out.push_back(G.contraction(m, 0));
  return out;
}

std::vector<PLCurve> deformation_frames(const LoopFamily& f, const ShorteningParams& params, std::size_t gap,
                                        std::size_t state, double slack) {
  if (gap >= f.gaps()) throw RangeError("deformation_frames: gap out of range");
  const ShorteningResult A = node_run(f, gap, params), B = node_run(f, gap + 1, params);
  const Gap G(A.family, B.family, gap + 2 == f.nodes());
  if (state >= G.states()) throw RangeError("deformation_frames: state out of range");
  return G.deformation(state, slack);
}

FamilyResult shorten_family(const LoopFamily& input, const ShorteningParams& params, const FamilyOptions& opt) {
  params.validate();
  FamilyResult r;
  r.family = refine_to_epsilon(input, opt.epsilon, opt.max_nodes);
  r.params = params;
  r.epsilon = opt.epsilon;
  const LoopFamily& f = r.family;
  r.L = opt.L ? *opt.L : f.max_length();
  if (f.max_length() > r.L + 1e-9) throw ConfigError("loop family exceeds the declared length bound");
  const Params sym = family_symbols(params, opt.epsilon, r.L);
  const double slack = opt.slack(sym);
  const double contraction_bound = evaluate(Formula::two_l_4a, sym);

  const std::size_t gaps = f.gaps();
  r.gaps.resize(gaps);
  r.beta.resize(f.nodes());
  r.steps.resize(f.nodes());
  const unsigned workers = std::min<unsigned>(worker_count(opt.threads), static_cast<unsigned>(gaps));
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::size_t> error_gap(workers, gaps);
  auto work = [&](unsigned w) {
    const std::size_t g0 = gaps * w / workers, g1 = gaps * (w + 1) / workers;
    std::size_t g = g0;
    try {
      ShorteningResult prev = node_run(f, g0, params);
      r.beta[g0] = prev.final;
      r.steps[g0] = prev.steps;
      for (; g < g1; ++g) {
        ShorteningResult next = node_run(f, g + 1, params);
        r.beta[g + 1] = next.final;
        r.steps[g + 1] = next.steps;
        const Gap G(prev.family, next.family, g + 2 == f.nodes());
        r.gaps[g] = process_gap(G, g, contraction_bound, slack);
        prev = std::move(next);
      }
    } catch (...) {
      errors[w] = std::current_exception();
      error_gap[w] = g;
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (std::thread& t : pool) t.join();
  }
  {
    std::size_t first = gaps;
    std::exception_ptr e;
    for (unsigned w = 0; w < workers; ++w)
      if (errors[w] && error_gap[w] < first) {
        first = error_gap[w];
        e = errors[w];
      }
    if (e) std::rethrow_exception(e);
  }

  double max_contraction = 0.0, max_tilde = 0.0;
  std::size_t worst = 0;
  for (const GapSummary& s : r.gaps) {
    max_contraction = std::max(max_contraction, s.max_contraction_measured);
    max_tilde = std::max(max_tilde, s.max_tilde_measured);
    r.max_vertical = std::max(r.max_vertical, s.max_vertical);
    r.max_short_side = std::max(r.max_short_side, s.max_short_side);
    if (!s.based) r.based = false;
    if (s.max_deformation > r.max_deformation) {
      r.max_deformation = s.max_deformation;
      worst = s.gap;
    }
  }
  r.disjoint = r.max_short_side <= params.l + params.a + params.delta + slack;

  std::vector<std::size_t> sample_gaps{worst};
  for (std::size_t k = 0; k < opt.sample_gaps && gaps > 0; ++k)
    sample_gaps.push_back(opt.sample_gaps == 1 ? 0 : k * (gaps - 1) / (opt.sample_gaps - 1));
  std::sort(sample_gaps.begin(), sample_gaps.end());
  sample_gaps.erase(std::unique(sample_gaps.begin(), sample_gaps.end()), sample_gaps.end());
  double sampled = 0.0;
  for (std::size_t g : sample_gaps) {
    const GapSummary& s = r.gaps[g];
    std::vector<std::size_t> states{0, s.states - 1, s.argmax_deformation};
    for (std::size_t k = 0; k < opt.sample_states; ++k)
      states.push_back(opt.sample_states == 1 ? 0 : k * (s.states - 1) / (opt.sample_states - 1));
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    const ShorteningResult A = node_run(f, g, params), B = node_run(f, g + 1, params);
    const Gap G(A.family, B.family, g + 2 == f.nodes());
    for (std::size_t m : states) {
      const std::vector<PLCurve> frames = G.deformation(m, slack);
      DeformationSample ds{g, m, G.deformation_max(m), 0.0, frames.size()};
      for (const PLCurve& c : frames) {
        ds.measured = std::max(ds.measured, remeasure(c));
        if (c.front() != f.basepoint || c.back() != f.basepoint) r.based = false;
      }
      if (m == 0 && !(same_points(frames.front(), f.loops[g]) && same_points(frames.back(), f.loops[g + 1])))
        r.start_matches = false;
      if (m + 1 == s.states) {
        const std::vector<PLCurve> tilde = G.tilde(contraction_bound, slack);
        if (tilde.size() != frames.size()) {
          r.end_matches = false;
        } else {
          for (std::size_t i = 0; i < tilde.size(); ++i)
            if (!same_points(tilde[i], frames[i])) r.end_matches = false;
        }
      }
      sampled = std::max(sampled, ds.measured);
      r.samples.push_back(ds);
    }
  }

  r.certs.push_back(make_certificate(Formula::two_l_4a, sym, max_contraction, slack));
  r.certs.push_back(make_certificate(Formula::three_l_5a, sym, max_tilde, slack));
  r.certs.push_back(make_certificate(Formula::L_5a_3l, sym, std::max(r.max_deformation, sampled), slack));
  return r;
}

}  // namespace geoloop
