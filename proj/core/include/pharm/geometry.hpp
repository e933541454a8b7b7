#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "pharm/error.hpp"

namespace pharm {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
  double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

/// Uniform grid of outward directions on the unit circle.
struct DirectionGrid {
  int m = 0;
  double dtheta = 0.0;
  std::vector<double> angles;
  std::vector<Vec2> dirs;

  double angle(int j) const { return angles[wrap(j)]; }
  Vec2 dir(int j) const { return dirs[wrap(j)]; }
  int wrap(int j) const { return ((j % m) + m) % m; }
};

inline bool same_grid(const DirectionGrid& a, const DirectionGrid& b) { return a.m == b.m; }

/// Convex body given by strictly positive support values on a direction grid.
struct SupportFunction {
  DirectionGrid grid;
  std::vector<double> h;

  double value(int j) const { return h[grid.wrap(j)]; }
};

/// Rigid translation plus positive scaling of a body.
struct BodyTransform {
  Vec2 translation{0.0, 0.0};
  double scale = 1.0;
};

DirectionGrid make_grid(int m);

SupportFunction support_of_ball(double radius, Vec2 center, const DirectionGrid& grid);
SupportFunction support_of_polygon(std::span<const Vec2> vertices, const DirectionGrid& grid);
SupportFunction support_of_ellipse(double a, double b, const DirectionGrid& grid);

/// Boundary point with outward normal in grid direction j (gradient of the
/// support function, with the angular derivative by centered differences).
Vec2 boundary_point(const SupportFunction& k, int j);

/// Discrete convexity tolerance: 1e-8 times the largest support value.
double convexity_tolerance(const SupportFunction& k);

/// Second-difference curvature density; entries within tolerance of zero are
/// clamped, entries below -tolerance raise not-convex.
std::vector<double> curvature_density(const SupportFunction& k);

/// Support function of the intersection of the halfplanes with offsets f.
SupportFunction wulff_shape(const DirectionGrid& grid, std::span<const double> f);

/// Wulff shape of (h_K^q + t h_L^q)^{1/q}.
SupportFunction q_sum(const SupportFunction& k, const SupportFunction& l, double q, double t);

double hausdorff(const SupportFunction& a, const SupportFunction& b);

SupportFunction translate(const SupportFunction& k, Vec2 x0);
SupportFunction scale(const SupportFunction& k, double lambda);
SupportFunction apply(const SupportFunction& k, const BodyTransform& t);

/// Largest r with r*(cos phi, sin phi) in the body.
double radial_function(const SupportFunction& k, double phi);

/// Center and radius of the largest inscribed disk (smoothed-min ascent;
/// deterministic and equivariant under translation and scaling).
Vec2 chebyshev_center(const SupportFunction& k);
double inradius(const SupportFunction& k);
double circumradius(const SupportFunction& k);

/// Steiner point (1/pi) integral of h(theta) xi(theta); linear in the support
/// values, interior for convex bodies, exactly equivariant.
Vec2 steiner_point(const SupportFunction& k);

/// Smooth proxy for the distance from x to the boundary: negative power mean
/// of the support slacks h_j - <x, xi_j>. Lies between the true distance and
/// the largest slack and responds smoothly to support perturbations.
double smooth_boundary_distance(const SupportFunction& k, Vec2 x);

double max_support(const SupportFunction& k);
double min_support(const SupportFunction& k);

/// FNV-1a over grid size and support bits; used to tag derived measures.
std::uint64_t body_hash(const SupportFunction& k);

}  // namespace pharm
