#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace geoloop {

// Coordinates: embedding coords for sphere/ellipsoid, chart coords for torus/surface.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;
using Point = Vec;

struct Tangent {
  Point base;
  Vec dir;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteState : public Error {
 public:
  using Error::Error;
};

class ShootingFailed : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

inline constexpr double kInjectivityMargin = 0.1;
inline constexpr double kDefaultGap = 0.05;
inline constexpr double kTraceStep = 1e-3;

enum class ManifoldKind { RoundSphere, Ellipsoid, FlatTorus, ParamSurface };

class Manifold {
 public:
  virtual ~Manifold() = default;

  virtual ManifoldKind kind() const = 0;
  virtual std::string kind_name() const = 0;
  virtual int dim() const = 0;
  virtual int coord_dim() const = 0;

  double diameter_bound() const { return diameter_bound_; }
  double ricci_floor() const { return ricci_floor_; }

  virtual Point canonical(const Point& p) const = 0;
  virtual bool contains(const Point& p, double tol = 1e-9) const = 0;
  virtual bool is_tangent(const Point& p, const Vec& v, double tol = 1e-9) const;

  // Metric inner product on T_p.
  virtual double inner(const Point& p, const Vec& u, const Vec& v) const;
  double norm(const Point& p, const Vec& v) const { return std::sqrt(inner(p, v, v)); }
  virtual Vec project_tangent(const Point& p, const Vec& v) const = 0;
  // Orthonormal basis of T_p in coordinates.
  std::vector<Vec> tangent_basis(const Point& p) const;

  // Short segments (below the injectivity margin).
  virtual double segment_length(const Point& p, const Point& q) const = 0;
  virtual Point interpolate(const Point& p, const Point& q, double t) const = 0;
  virtual Vec log(const Point& p, const Point& q) const = 0;
  virtual Point exp(const Point& p, const Vec& v) const = 0;

  // Global.
  virtual double distance(const Point& p, const Point& q) const = 0;
  virtual std::vector<Point> minimal_geodesic(const Point& p, const Point& q,
                                              double max_gap = kDefaultGap) const = 0;

  // Fixed-step RK4 on the geodesic ODE, breakpoints at equal arc spacing.
  std::vector<Point> trace_geodesic(const Tangent& t, double arc, double max_gap = kDefaultGap,
                                    double h = kTraceStep) const;

  virtual Point sample(std::mt19937_64& rng) const = 0;

 protected:
  // Second derivative of the coordinate path for the geodesic ODE.
  virtual Vec geodesic_accel(const Point& x, const Vec& v) const = 0;
  // Hook run after each RK4 step (wrapping for periodic charts).
  virtual void post_step(Point&) const {}

  void rk4(Point& x, Vec& v, double h, int steps) const;

  double diameter_bound_ = 0.0;
  double ricci_floor_ = 0.0;

};

using ManifoldPtr = std::shared_ptr<const Manifold>;

class RoundSphere final : public Manifold {
 public:
  RoundSphere(int dim, double radius, std::optional<double> diameter_bound = std::nullopt);

  ManifoldKind kind() const override { return ManifoldKind::RoundSphere; }
  std::string kind_name() const override { return "round_sphere"; }
  int dim() const override { return dim_; }
  int coord_dim() const override { return dim_ + 1; }
  double radius() const { return radius_; }

  Point canonical(const Point& p) const override;
  bool contains(const Point& p, double tol = 1e-9) const override;
  Vec project_tangent(const Point& p, const Vec& v) const override;

  double angle(const Point& p, const Point& q) const;
  double segment_length(const Point& p, const Point& q) const override;
  Point interpolate(const Point& p, const Point& q, double t) const override;
  Vec log(const Point& p, const Point& q) const override;
  Point exp(const Point& p, const Vec& v) const override;
  double distance(const Point& p, const Point& q) const override;
  std::vector<Point> minimal_geodesic(const Point& p, const Point& q,
                                      double max_gap = kDefaultGap) const override;
  Point sample(std::mt19937_64& rng) const override;

 protected:
  Vec geodesic_accel(const Point& x, const Vec& v) const override;

 private:
  Vec antipodal_direction(const Point& p) const;
  int dim_;
  double radius_;
};

class FlatTorus final : public Manifold {
 public:
  explicit FlatTorus(std::vector<double> periods, std::optional<double> diameter_bound = std::nullopt);

  ManifoldKind kind() const override { return ManifoldKind::FlatTorus; }
  std::string kind_name() const override { return "flat_torus"; }
  int dim() const override { return static_cast<int>(periods_.size()); }
  int coord_dim() const override { return dim(); }
  const std::vector<double>& periods() const { return periods_; }

  Point canonical(const Point& p) const override;
  bool contains(const Point& p, double tol = 1e-9) const override;
  Vec project_tangent(const Point&, const Vec& v) const override { return v; }

  // Displacement to the nearest deck translate of q.
  Vec wrap(const Vec& d) const;
  double segment_length(const Point& p, const Point& q) const override;
  Point interpolate(const Point& p, const Point& q, double t) const override;
  Vec log(const Point& p, const Point& q) const override;
  Point exp(const Point& p, const Vec& v) const override;
  double distance(const Point& p, const Point& q) const override;
  std::vector<Point> minimal_geodesic(const Point& p, const Point& q,
                                      double max_gap = kDefaultGap) const override;
  Point sample(std::mt19937_64& rng) const override;

 protected:
  Vec geodesic_accel(const Point& x, const Vec& v) const override;
  void post_step(Point& x) const override { x = canonical(x); }

 private:
  std::vector<double> periods_;
};

// Manifolds without closed-form geodesics: local Gauss-Newton on exp, global shooting.
class ShootingManifold : public Manifold {
 public:
  Vec log(const Point& p, const Point& q) const override;
  Point exp(const Point& p, const Vec& v) const override;
  double segment_length(const Point& p, const Point& q) const override;
  Point interpolate(const Point& p, const Point& q, double t) const override;
  double distance(const Point& p, const Point& q) const override;
  std::vector<Point> minimal_geodesic(const Point& p, const Point& q,
                                      double max_gap = kDefaultGap) const override;

  struct Shot {
    Vec v;          // initial velocity, |v| = length
    double length;
    int direction;  // index of the seed direction
  };
  Shot shoot(const Point& p, const Point& q) const;

  static constexpr int kDirections = 32;
  static constexpr std::size_t kCandidates = 10;
  static constexpr double kPolishStep = 4e-3;
  static constexpr double kLocalStep = 5e-3;

 protected:
  // Coordinate difference p - q for residuals (wrapped on periodic charts).
  virtual Vec residual(const Point& p, const Point& q) const { return p - q; }
  Point exp_steps(const Point& p, const Vec& v, double h) const;
  std::optional<Vec> newton(const Point& p, const Point& q, Vec v0, double h, int max_iter) const;
};

class Ellipsoid final : public ShootingManifold {
 public:
  explicit Ellipsoid(std::vector<double> semi_axes, std::optional<double> diameter_bound = std::nullopt,
                     double ricci_floor = 0.0);

  ManifoldKind kind() const override { return ManifoldKind::Ellipsoid; }
  std::string kind_name() const override { return "ellipsoid"; }
  int dim() const override { return static_cast<int>(axes_.size()) - 1; }
  int coord_dim() const override { return static_cast<int>(axes_.size()); }
  const std::vector<double>& semi_axes() const { return axes_; }

  Point canonical(const Point& p) const override;
  bool contains(const Point& p, double tol = 1e-9) const override;
  Vec project_tangent(const Point& p, const Vec& v) const override;
  Vec gradient(const Point& p) const;
  Point sample(std::mt19937_64& rng) const override;

 protected:
  Vec geodesic_accel(const Point& x, const Vec& v) const override;

 private:
  std::vector<double> axes_;
};

// Two-dimensional chart with metric coefficients E, F, G; optional periods.
class ParamSurface final : public ShootingManifold {
 public:
  using MetricFn = std::function<Eigen::Matrix2d(double u, double v)>;

  ParamSurface(std::string name, MetricFn metric, std::array<double, 2> periods, double diameter_bound,
               double ricci_floor = 0.0);

  static std::shared_ptr<ParamSurface> torus_of_revolution(double R, double r,
                                                           std::optional<double> diameter_bound = std::nullopt);

  ManifoldKind kind() const override { return ManifoldKind::ParamSurface; }
  std::string kind_name() const override { return "param_surface"; }
  const std::string& name() const { return name_; }
  int dim() const override { return 2; }
  int coord_dim() const override { return 2; }

  Eigen::Matrix2d metric(const Point& p) const { return metric_(p(0), p(1)); }
  Point canonical(const Point& p) const override;
  bool contains(const Point& p, double tol = 1e-9) const override;
  double inner(const Point& p, const Vec& u, const Vec& v) const override;
  Vec project_tangent(const Point&, const Vec& v) const override { return v; }
  Point sample(std::mt19937_64& rng) const override;

 protected:
  Vec geodesic_accel(const Point& x, const Vec& v) const override;
  void post_step(Point& x) const override { x = canonical(x); }
  Vec residual(const Point& p, const Point& q) const override;

 private:
  std::string name_;
  MetricFn metric_;
  std::array<double, 2> periods_;
};

Point make_point(std::initializer_list<double> xs);
Point make_point(const std::vector<double>& xs);
std::vector<double> to_vector(const Point& p);

// Largest distance among sampled pairs; used to validate configured diameter bounds.
double sampled_diameter(const Manifold& m, int pairs, std::uint64_t seed);

}  // namespace geoloop
