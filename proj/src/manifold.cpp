#include "geoloop/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace geoloop {

namespace {

bool finite(const Vec& v) { return v.allFinite(); }

}  // namespace

Point make_point(std::initializer_list<double> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) p(i++) = x;
  return p;
}

Point make_point(const std::vector<double>& xs) {
  if (xs.empty() || xs.size() > 4) throw ConfigError("point must have 1..4 coordinates");
  Point p(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) p(static_cast<Eigen::Index>(i)) = xs[i];
  return p;
}

std::vector<double> to_vector(const Point& p) { return {p.data(), p.data() + p.size()}; }

// ---------------------------------------------------------------- Manifold

bool Manifold::is_tangent(const Point& p, const Vec& v, double tol) const {
  return (project_tangent(p, v) - v).norm() <= tol * std::max(1.0, v.norm());
}

double Manifold::inner(const Point&, const Vec& u, const Vec& v) const { return u.dot(v); }

std::vector<Vec> Manifold::tangent_basis(const Point& p) const {
  std::vector<Vec> basis;
  const int n = coord_dim();
  for (int j = 0; j < n && static_cast<int>(basis.size()) < dim(); ++j) {
    Vec e = Vec::Zero(n);
    e(j) = 1.0;
    Vec w = project_tangent(p, e);
    for (const Vec& b : basis) w -= inner(p, w, b) * b;
    const double nw = norm(p, w);
    if (nw > 1e-6) basis.push_back(w / nw);
  }
  return basis;
}

void Manifold::rk4(Point& x, Vec& v, double h, int steps) const {
  for (int s = 0; s < steps; ++s) {
    const Vec k1x = v;
    const Vec k1v = geodesic_accel(x, v);
    const Vec k2x = v + 0.5 * h * k1v;
    const Vec k2v = geodesic_accel(x + 0.5 * h * k1x, k2x);
    const Vec k3x = v + 0.5 * h * k2v;
    const Vec k3v = geodesic_accel(x + 0.5 * h * k2x, k3x);
    const Vec k4x = v + h * k3v;
    const Vec k4v = geodesic_accel(x + h * k3x, k4x);
    x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    post_step(x);
  }
  if (!finite(x) || !finite(v)) throw NonFiniteState("geodesic integration diverged");
}

std::vector<Point> Manifold::trace_geodesic(const Tangent& t, double arc, double max_gap, double h) const {
  if (!(arc >= 0.0)) throw std::invalid_argument("trace_geodesic: arc must be nonnegative");
  Point x = canonical(t.base);
  Vec v = project_tangent(x, t.dir);
  const double speed = norm(x, v);
  if (!(speed > 0.0)) throw std::invalid_argument("trace_geodesic: direction must be nonzero");
  if (arc == 0.0) return {x};
  v /= speed;
  const int nseg = std::max(1, static_cast<int>(std::ceil(arc / max_gap - 1e-12)));
  const double seg = arc / nseg;
  const int sub = std::max(1, static_cast<int>(std::ceil(seg / h - 1e-12)));
  const double step = seg / sub;
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(nseg) + 1);
  pts.push_back(x);
  for (int k = 0; k < nseg; ++k) {
    rk4(x, v, step, sub);
    pts.push_back(x);
  }
  return pts;
}

double sampled_diameter(const Manifold& m, int pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double best = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const Point p = m.sample(rng);
    const Point q = m.sample(rng);
    best = std::max(best, m.distance(p, q));
  }
  return best;
}

// ---------------------------------------------------------------- RoundSphere

RoundSphere::RoundSphere(int dim, double radius, std::optional<double> diameter_bound)
    : dim_(dim), radius_(radius) {
  if (dim < 2 || dim > 3) throw ConfigError("round_sphere: dim must be 2 or 3");
  if (!(radius > 0.0)) throw ConfigError("round_sphere: radius must be positive");
  const double analytic = std::numbers::pi * radius;
  if (diameter_bound && *diameter_bound < analytic - 1e-6)
    throw ConfigError("round_sphere: diameter_bound below pi*radius");
  diameter_bound_ = diameter_bound.value_or(analytic);
  ricci_floor_ = (dim - 1) / (radius * radius);
}

Point RoundSphere::canonical(const Point& p) const { return p * (radius_ / p.norm()); }

bool RoundSphere::contains(const Point& p, double tol) const {
  return p.size() == coord_dim() && std::abs(p.norm() - radius_) <= tol;
}

Vec RoundSphere::project_tangent(const Point& p, const Vec& v) const {
  return v - (v.dot(p) / p.squaredNorm()) * p;
}

double RoundSphere::angle(const Point& p, const Point& q) const {
  return 2.0 * std::atan2((p - q).norm(), (p + q).norm());
}

double RoundSphere::segment_length(const Point& p, const Point& q) const { return radius_ * angle(p, q); }

Point RoundSphere::interpolate(const Point& p, const Point& q, double t) const {
  if (t == 0.0) return p;
  if (t == 1.0) return q;
  const double th = angle(p, q);
  Point r;
  if (th < 1e-9) {
    r = p + t * (q - p);
  } else {
    const double s = std::sin(th);
    r = (std::sin((1.0 - t) * th) / s) * p + (std::sin(t * th) / s) * q;
  }
  return r * (radius_ / r.norm());
}

Vec RoundSphere::antipodal_direction(const Point& p) const {
  for (int j = 0; j < coord_dim(); ++j) {
    Vec e = Vec::Zero(coord_dim());
    e(j) = 1.0;
    Vec w = project_tangent(p, e);
    if (w.norm() > 0.5) return w / w.norm();
  }
  return Vec::Zero(coord_dim());
}

Vec RoundSphere::log(const Point& p, const Point& q) const {
  const double th = angle(p, q);
  if (th == 0.0) return Vec::Zero(coord_dim());
  Vec w = project_tangent(p, q);
  const double nw = w.norm();
  if (nw < 1e-14 * radius_) return antipodal_direction(p) * (radius_ * th);
  return w * (radius_ * th / nw);
}

Point RoundSphere::exp(const Point& p, const Vec& v) const {
  const double s = v.norm();
  if (s == 0.0) return p;
  const double th = s / radius_;
  Point r = std::cos(th) * p + (radius_ * std::sin(th) / s) * v;
  return r * (radius_ / r.norm());
}

double RoundSphere::distance(const Point& p, const Point& q) const { return segment_length(p, q); }

std::vector<Point> RoundSphere::minimal_geodesic(const Point& p, const Point& q, double max_gap) const {
  const double len = segment_length(p, q);
  if (len == 0.0) return {p};
  const int n = std::max(1, static_cast<int>(std::ceil(len / max_gap - 1e-12)));
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n) + 1);
  pts.push_back(p);
  const bool antipodal = (p + q).norm() < 1e-12 * radius_;
  const Vec dir = antipodal ? antipodal_direction(p) : Vec(log(p, q) / len);
  for (int k = 1; k < n; ++k) {
    const double t = static_cast<double>(k) / n;
    pts.push_back(antipodal ? exp(p, dir * (t * len)) : interpolate(p, q, t));
  }
  pts.push_back(q);
  return pts;
}

Point RoundSphere::sample(std::mt19937_64& rng) const {
  std::normal_distribution<double> nd;
  Point p(coord_dim());
  do {
    for (int i = 0; i < coord_dim(); ++i) p(i) = nd(rng);
  } while (p.norm() < 1e-6);
  return canonical(p);
}

Vec RoundSphere::geodesic_accel(const Point& x, const Vec& v) const {
  return -(v.squaredNorm() / (radius_ * radius_)) * x;
}

// ---------------------------------------------------------------- FlatTorus

FlatTorus::FlatTorus(std::vector<double> periods, std::optional<double> diameter_bound)
    : periods_(std::move(periods)) {
  if (periods_.size() < 2 || periods_.size() > 4) throw ConfigError("flat_torus: dim must be 2..4");
  double sq = 0.0;
  for (double P : periods_) {
    if (!(P > 0.0)) throw ConfigError("flat_torus: periods must be positive");
    sq += 0.25 * P * P;
  }
  const double analytic = std::sqrt(sq);
  if (diameter_bound && *diameter_bound < analytic - 1e-6)
    throw ConfigError("flat_torus: diameter_bound below the analytic diameter");
  diameter_bound_ = diameter_bound.value_or(analytic);
  ricci_floor_ = 0.0;
}

Point FlatTorus::canonical(const Point& p) const {
  Point r = p;
  for (int i = 0; i < r.size(); ++i) {
    const double P = periods_[static_cast<std::size_t>(i)];
    double x = std::fmod(r(i), P);
    if (x < 0.0) x += P;
    if (x >= P) x = 0.0;
    r(i) = x;
  }
  return r;
}

bool FlatTorus::contains(const Point& p, double) const {
  if (p.size() != coord_dim()) return false;
  for (int i = 0; i < p.size(); ++i)
    if (!(p(i) >= 0.0 && p(i) < periods_[static_cast<std::size_t>(i)])) return false;
  return true;
}

Vec FlatTorus::wrap(const Vec& d) const {
  Vec r = d;
  for (int i = 0; i < r.size(); ++i) {
    const double P = periods_[static_cast<std::size_t>(i)];
    r(i) -= P * std::round(r(i) / P);
  }
  return r;
}

double FlatTorus::segment_length(const Point& p, const Point& q) const { return wrap(q - p).norm(); }

Point FlatTorus::interpolate(const Point& p, const Point& q, double t) const {
  if (t == 0.0) return p;
  if (t == 1.0) return q;
  return canonical(p + t * wrap(q - p));
}

Vec FlatTorus::log(const Point& p, const Point& q) const { return wrap(q - p); }

Point FlatTorus::exp(const Point& p, const Vec& v) const { return canonical(p + v); }

double FlatTorus::distance(const Point& p, const Point& q) const { return segment_length(p, q); }

std::vector<Point> FlatTorus::minimal_geodesic(const Point& p, const Point& q, double max_gap) const {
  const Vec d = wrap(q - p);
  const double len = d.norm();
  if (len == 0.0) return {p};
  const int n = std::max(1, static_cast<int>(std::ceil(len / max_gap - 1e-12)));
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n) + 1);
  pts.push_back(p);
  for (int k = 1; k < n; ++k) pts.push_back(canonical(p + (static_cast<double>(k) / n) * d));
  pts.push_back(q);
  return pts;
}

Point FlatTorus::sample(std::mt19937_64& rng) const {
  Point p(coord_dim());
  for (int i = 0; i < coord_dim(); ++i) {
    std::uniform_real_distribution<double> u(0.0, periods_[static_cast<std::size_t>(i)]);
    p(i) = u(rng);
  }
  return canonical(p);
}

Vec FlatTorus::geodesic_accel(const Point& x, const Vec&) const { return Vec::Zero(x.size()); }

// ---------------------------------------------------------------- ShootingManifold

Point ShootingManifold::exp_steps(const Point& p, const Vec& v, double h) const {
  const double s = norm(p, v);
  if (s == 0.0) return p;
  const int n = std::max(1, static_cast<int>(std::ceil(s / h)));
  Point x = p;
  Vec u = v;
  rk4(x, u, 1.0 / n, n);
  return canonical(x);
}

Point ShootingManifold::exp(const Point& p, const Vec& v) const { return exp_steps(p, v, kLocalStep); }

std::optional<Vec> ShootingManifold::newton(const Point& p, const Point& q, Vec v0, double h,
                                            int max_iter) const {
  const std::vector<Vec> B = tangent_basis(p);
  const int d = static_cast<int>(B.size());
  auto velocity = [&](const Eigen::VectorXd& w) {
    Vec v = Vec::Zero(coord_dim());
    for (int k = 0; k < d; ++k) v += w(k) * B[static_cast<std::size_t>(k)];
    return v;
  };
  Eigen::VectorXd w(d);
  for (int k = 0; k < d; ++k) w(k) = inner(p, v0, B[static_cast<std::size_t>(k)]);
  auto res = [&](const Eigen::VectorXd& ww) -> Eigen::VectorXd {
    const Vec r = residual(exp_steps(p, velocity(ww), h), q);
    return Eigen::VectorXd(r);
  };
  Eigen::VectorXd r = res(w);
  double rn = r.norm();
  for (int it = 0; it < max_iter; ++it) {
    if (rn < 1e-11) return velocity(w);
    Eigen::MatrixXd J(r.size(), d);
    const double eta = 1e-7 * std::max(1.0, w.norm());
    for (int k = 0; k < d; ++k) {
      Eigen::VectorXd wk = w;
      wk(k) += eta;
      J.col(k) = (res(wk) - r) / eta;
    }
    const Eigen::VectorXd step = (J.transpose() * J).ldlt().solve(-J.transpose() * r);
    if (!step.allFinite()) return std::nullopt;
    double alpha = 1.0;
    bool improved = false;
    while (alpha > 1e-4) {
      const Eigen::VectorXd wn = w + alpha * step;
      const Eigen::VectorXd rr = res(wn);
      if (rr.norm() < rn) {
        w = wn;
        r = rr;
        rn = rr.norm();
        improved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!improved) break;
  }
  if (rn < 1e-9) return velocity(w);
  return std::nullopt;
}

Vec ShootingManifold::log(const Point& p, const Point& q) const {
  const Vec d = -residual(p, q);
  if (d.norm() == 0.0) return Vec::Zero(coord_dim());
  if (auto v = newton(p, q, project_tangent(p, d), kLocalStep, 40)) return *v;
  throw ShootingFailed("local geodesic solve failed");
}

double ShootingManifold::segment_length(const Point& p, const Point& q) const { return norm(p, log(p, q)); }

Point ShootingManifold::interpolate(const Point& p, const Point& q, double t) const {
  if (t == 0.0) return p;
  if (t == 1.0) return q;
  return exp(p, t * log(p, q));
}

ShootingManifold::Shot ShootingManifold::shoot(const Point& p, const Point& q) const {
  const std::vector<Vec> B = tangent_basis(p);
  const int d = static_cast<int>(B.size());
  std::vector<Vec> dirs;
  if (d == 2) {
    for (int j = 0; j < kDirections; ++j) {
      const double th = 2.0 * std::numbers::pi * j / kDirections;
      dirs.push_back(std::cos(th) * B[0] + std::sin(th) * B[1]);
    }
  } else {
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> nd;
    for (int j = 0; j < kDirections; ++j) {
      Vec v = Vec::Zero(coord_dim());
      for (int k = 0; k < d; ++k) v += nd(rng) * B[static_cast<std::size_t>(k)];
      dirs.push_back(v / norm(p, v));
    }
  }
  const double coarse = 2e-2;
  const double smax = 1.3 * diameter_bound_;
  const int nsteps = static_cast<int>(std::ceil(smax / coarse));
  struct Approach {
    double residual;
    double s;
    int j;
  };
  std::vector<Approach> scan;
  for (int j = 0; j < kDirections; ++j) {
    Point x = p;
    Vec v = dirs[static_cast<std::size_t>(j)];
    double best = residual(x, q).norm();
    double sbest = 0.0;
    for (int k = 1; k <= nsteps; ++k) {
      rk4(x, v, coarse, 1);
      const double r = residual(x, q).norm();
      if (r < best) {
        best = r;
        sbest = k * coarse;
      }
    }
    if (sbest > 0.0) scan.push_back({best, sbest, j});
  }
  std::stable_sort(scan.begin(), scan.end(), [](const Approach& a, const Approach& b) { return a.residual < b.residual; });
  if (scan.size() > kCandidates) scan.resize(kCandidates);
  std::vector<Shot> found;
  for (const Approach& a : scan) {
    auto rough = newton(p, q, dirs[static_cast<std::size_t>(a.j)] * a.s, 2.0 * coarse, 15);
    if (!rough) continue;
    const double len = norm(p, *rough);
    if (len > diameter_bound_ + 1e-6) continue;
    found.push_back({*rough, len, a.j});
  }
  if (found.empty()) throw ShootingFailed("no shooting direction reached the target");
  const Shot* pick = &found.front();
  for (const Shot& s : found) {
    const bool shorter = s.length < pick->length * (1.0 - 1e-6);
    const bool tie = !shorter && s.length <= pick->length * (1.0 + 1e-6);
    if (shorter || (tie && s.direction < pick->direction)) pick = &s;
  }
  auto v = newton(p, q, pick->v, kPolishStep, 10);
  if (!v) throw ShootingFailed("shooting refinement failed");
  return {*v, norm(p, *v), pick->direction};
}

double ShootingManifold::distance(const Point& p, const Point& q) const {
  const double chord = residual(p, q).norm();
  if (chord == 0.0) return 0.0;
  if (chord < 0.5 * kInjectivityMargin) return segment_length(p, q);
  return shoot(p, q).length;
}

std::vector<Point> ShootingManifold::minimal_geodesic(const Point& p, const Point& q, double max_gap) const {
  const double chord = residual(p, q).norm();
  if (chord == 0.0) return {p};
  if (chord < 0.5 * kInjectivityMargin) {
    const Vec v = log(p, q);
    const double len = norm(p, v);
    const int n = std::max(1, static_cast<int>(std::ceil(len / max_gap - 1e-12)));
    std::vector<Point> pts{p};
    for (int k = 1; k < n; ++k) pts.push_back(exp(p, (static_cast<double>(k) / n) * v));
    pts.push_back(q);
    return pts;
  }
  const Shot s = shoot(p, q);
  std::vector<Point> pts = trace_geodesic({p, s.v}, s.length, max_gap);
  pts.front() = p;
  pts.back() = q;
  return pts;
}

// ---------------------------------------------------------------- Ellipsoid

Ellipsoid::Ellipsoid(std::vector<double> semi_axes, std::optional<double> diameter_bound, double ricci_floor)
    : axes_(std::move(semi_axes)) {
  if (axes_.size() < 3 || axes_.size() > 4) throw ConfigError("ellipsoid: need 3 or 4 semi-axes");
  double cmax = 0.0;
  for (double c : axes_) {
    if (!(c > 0.0)) throw ConfigError("ellipsoid: semi-axes must be positive");
    cmax = std::max(cmax, c);
  }
  diameter_bound_ = diameter_bound.value_or(std::numbers::pi * cmax);
  ricci_floor_ = ricci_floor;
}

Vec Ellipsoid::gradient(const Point& p) const {
  Vec g(p.size());
  for (int i = 0; i < p.size(); ++i) {
    const double c = axes_[static_cast<std::size_t>(i)];
    g(i) = 2.0 * p(i) / (c * c);
  }
  return g;
}

Point Ellipsoid::canonical(const Point& p) const {
  double s = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    const double c = axes_[static_cast<std::size_t>(i)];
    s += p(i) * p(i) / (c * c);
  }
  return p / std::sqrt(s);
}

bool Ellipsoid::contains(const Point& p, double tol) const {
  if (p.size() != coord_dim()) return false;
  double s = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    const double c = axes_[static_cast<std::size_t>(i)];
    s += p(i) * p(i) / (c * c);
  }
  return std::abs(s - 1.0) <= tol;
}

Vec Ellipsoid::project_tangent(const Point& p, const Vec& v) const {
  const Vec g = gradient(p);
  return v - (v.dot(g) / g.squaredNorm()) * g;
}

Vec Ellipsoid::geodesic_accel(const Point& x, const Vec& v) const {
  Vec g(x.size());
  double h = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    const double c2 = axes_[static_cast<std::size_t>(i)] * axes_[static_cast<std::size_t>(i)];
    g(i) = 2.0 * x(i) / c2;
    h += 2.0 * v(i) * v(i) / c2;
  }
  return -(h / g.squaredNorm()) * g;
}

Point Ellipsoid::sample(std::mt19937_64& rng) const {
  std::normal_distribution<double> nd;
  Point p(coord_dim());
  do {
    for (int i = 0; i < coord_dim(); ++i) p(i) = nd(rng);
  } while (p.norm() < 1e-6);
  return canonical(p);
}

// ---------------------------------------------------------------- ParamSurface

ParamSurface::ParamSurface(std::string name, MetricFn metric, std::array<double, 2> periods,
                           double diameter_bound, double ricci_floor)
    : name_(std::move(name)), metric_(std::move(metric)), periods_(periods) {
  if (!(diameter_bound > 0.0)) throw ConfigError("param_surface: diameter_bound must be positive");
  diameter_bound_ = diameter_bound;
  ricci_floor_ = ricci_floor;
}

std::shared_ptr<ParamSurface> ParamSurface::torus_of_revolution(double R, double r,
                                                                std::optional<double> diameter_bound) {
  if (!(R > r && r > 0.0)) throw ConfigError("torus_of_revolution: need R > r > 0");
  auto metric = [R, r](double, double v) {
    Eigen::Matrix2d g;
    const double w = R + r * std::cos(v);
    g << w * w, 0.0, 0.0, r * r;
    return g;
  };
  const double tau = 2.0 * std::numbers::pi;
  return std::make_shared<ParamSurface>("torus_of_revolution", metric, std::array<double, 2>{tau, tau},
                                        diameter_bound.value_or(std::numbers::pi * (R + 2.0 * r)));
}

Point ParamSurface::canonical(const Point& p) const {
  Point q = p;
  for (int i = 0; i < 2; ++i) {
    const double P = periods_[static_cast<std::size_t>(i)];
    if (P <= 0.0) continue;
    double x = std::fmod(q(i), P);
    if (x < 0.0) x += P;
    if (x >= P) x = 0.0;
    q(i) = x;
  }
  return q;
}

bool ParamSurface::contains(const Point& p, double) const {
  if (p.size() != 2 || !p.allFinite()) return false;
  for (int i = 0; i < 2; ++i) {
    const double P = periods_[static_cast<std::size_t>(i)];
    if (P > 0.0 && !(p(i) >= 0.0 && p(i) < P)) return false;
  }
  return true;
}

double ParamSurface::inner(const Point& p, const Vec& u, const Vec& v) const {
  const Eigen::Matrix2d g = metric(p);
  return u(0) * (g(0, 0) * v(0) + g(0, 1) * v(1)) + u(1) * (g(1, 0) * v(0) + g(1, 1) * v(1));
}

Vec ParamSurface::residual(const Point& p, const Point& q) const {
  Vec d = p - q;
  for (int i = 0; i < 2; ++i) {
    const double P = periods_[static_cast<std::size_t>(i)];
    if (P > 0.0) d(i) -= P * std::round(d(i) / P);
  }
  return d;
}

Vec ParamSurface::geodesic_accel(const Point& x, const Vec& v) const {
  const double eta = 1e-6;
  std::array<Eigen::Matrix2d, 2> dg;
  for (int k = 0; k < 2; ++k) {
    Point a = x, b = x;
    a(k) += eta;
    b(k) -= eta;
    dg[static_cast<std::size_t>(k)] = (metric_(a(0), a(1)) - metric_(b(0), b(1))) / (2.0 * eta);
  }
  const Eigen::Matrix2d ginv = metric_(x(0), x(1)).inverse();
  // Gamma_l = 1/2 (d_i g_jl + d_j g_il - d_l g_ij) v^i v^j
  Eigen::Vector2d lower;
  for (int l = 0; l < 2; ++l) {
    double s = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        s += 0.5 * (dg[static_cast<std::size_t>(i)](j, l) + dg[static_cast<std::size_t>(j)](i, l) -
                    dg[static_cast<std::size_t>(l)](i, j)) *
             v(i) * v(j);
    lower(l) = s;
  }
  const Eigen::Vector2d a = -ginv * lower;
  Vec r(2);
  r << a(0), a(1);
  return r;
}

Point ParamSurface::sample(std::mt19937_64& rng) const {
  Point p(2);
  for (int i = 0; i < 2; ++i) {
    const double P = periods_[static_cast<std::size_t>(i)];
    std::uniform_real_distribution<double> u(0.0, P > 0.0 ? P : 1.0);
    p(i) = u(rng);
  }
  return canonical(p);
}

}  // namespace geoloop
