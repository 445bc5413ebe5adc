#pragma once

#include "geoloop/curve.hpp"

#include <cstdint>

namespace geoloop {

// Wandering p -> q curve of exactly target_length (up to 1e-9), built from a
// Brownian-heading walk closed by a minimal geodesic.
PLCurve random_wiggle(const ManifoldPtr& m, const Point& p, const Point& q, double target_length,
                      std::uint64_t seed, double wiggle = 6.0);

// Loop at the north pole: down the meridian at longitude 0, back up at longitude 2 pi t.
// Sphere (dim 2) or ellipsoid with equal first two semi-axes.
PLCurve meridian_loop(const ManifoldPtr& m, double t, double max_gap = kDefaultGap);
Point north_pole(const ManifoldPtr& m);

// Flat-torus loop or path from p along the straight line in class (wx, wy), with a sinusoidal wobble.
PLCurve winding_line(const ManifoldPtr& m, const Point& p, double wx, double wy, double wobble = 0.0,
                     int waves = 3, double max_gap = kDefaultGap);

}  // namespace geoloop
