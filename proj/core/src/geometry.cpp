#include "pharm/geometry.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <numbers>
#include <numeric>

namespace pharm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Convex hull of points in general position, Andrew's monotone chain.
// Collinear points are dropped; output is counterclockwise.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  const int n = static_cast<int>(pts.size());
  if (n < 3) return pts;
  std::vector<Vec2> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (int i = n - 2, lower = k + 1; i >= 0; --i) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

DirectionGrid make_grid(int m) {
  if (m < 8) {
    throw Error(ErrorCode::grid_too_coarse, "need at least 8 directions, got " + std::to_string(m));
  }
  DirectionGrid grid;
  grid.m = m;
  grid.dtheta = kTwoPi / m;
  grid.angles.resize(m);
  grid.dirs.resize(m);
  for (int j = 0; j < m; ++j) {
    grid.angles[j] = grid.dtheta * j;
    grid.dirs[j] = {std::cos(grid.angles[j]), std::sin(grid.angles[j])};
  }
  return grid;
}

SupportFunction support_of_ball(double radius, Vec2 center, const DirectionGrid& grid) {
  if (!(radius > center.norm())) {
    throw Error(ErrorCode::origin_not_interior,
                "ball radius " + std::to_string(radius) + " does not cover the origin");
  }
  SupportFunction k{grid, std::vector<double>(grid.m)};
  for (int j = 0; j < grid.m; ++j) k.h[j] = radius + dot(center, grid.dirs[j]);
  return k;
}

SupportFunction support_of_polygon(std::span<const Vec2> vertices, const DirectionGrid& grid) {
  if (vertices.size() < 3) {
    throw Error(ErrorCode::origin_not_interior, "polygon needs at least 3 vertices");
  }
  // Origin strictly inside the hull iff every hull edge keeps it on the left.
  std::vector<Vec2> hull = convex_hull({vertices.begin(), vertices.end()});
  if (hull.size() < 3) {
    throw Error(ErrorCode::origin_not_interior, "degenerate polygon");
  }
  for (size_t i = 0; i < hull.size(); ++i) {
    const Vec2 a = hull[i];
    const Vec2 b = hull[(i + 1) % hull.size()];
    if (cross(b - a, -a) <= 0.0) {
      throw Error(ErrorCode::origin_not_interior, "origin outside polygon hull");
    }
  }
  SupportFunction k{grid, std::vector<double>(grid.m)};
  for (int j = 0; j < grid.m; ++j) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec2& v : vertices) best = std::max(best, dot(v, grid.dirs[j]));
    k.h[j] = best;
  }
  return k;
}

SupportFunction support_of_ellipse(double a, double b, const DirectionGrid& grid) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw Error(ErrorCode::origin_not_interior, "ellipse semi-axes must be positive");
  }
  SupportFunction k{grid, std::vector<double>(grid.m)};
  for (int j = 0; j < grid.m; ++j) {
    const double c = grid.dirs[j].x;
    const double s = grid.dirs[j].y;
    k.h[j] = std::sqrt(a * a * c * c + b * b * s * s);
  }
  return k;
}

Vec2 boundary_point(const SupportFunction& k, int j) {
  const DirectionGrid& g = k.grid;
  const double hp = (k.value(j + 1) - k.value(j - 1)) / (2.0 * g.dtheta);
  const Vec2 xi = g.dir(j);
  const Vec2 xi_perp{-xi.y, xi.x};
  return xi * k.value(j) + xi_perp * hp;
}

double convexity_tolerance(const SupportFunction& k) { return 1e-8 * max_support(k); }

std::vector<double> curvature_density(const SupportFunction& k) {
  const DirectionGrid& g = k.grid;
  const double tol = convexity_tolerance(k);
  std::vector<double> s(g.m);
  for (int j = 0; j < g.m; ++j) {
    const double second = (k.value(j - 1) - 2.0 * k.value(j) + k.value(j + 1)) / (g.dtheta * g.dtheta);
    double v = second + k.value(j);
    if (v < -tol) {
      throw Error(ErrorCode::not_convex,
                  "curvature density " + std::to_string(v) + " at index " + std::to_string(j));
    }
    s[j] = std::max(v, 0.0);
  }
  return s;
}

SupportFunction wulff_shape(const DirectionGrid& grid, std::span<const double> f) {
  if (static_cast<int>(f.size()) != grid.m) {
    throw Error(ErrorCode::grid_mismatch, "offset array does not match grid");
  }
  for (int j = 0; j < grid.m; ++j) {
    if (!(f[j] > 0.0) || !std::isfinite(f[j])) {
      throw Error(ErrorCode::degenerate_wulff,
                  "nonpositive halfplane offset at index " + std::to_string(j));
    }
  }
  // Dualize: constraint <x, xi_j> <= f_j becomes the point xi_j / f_j. Hull
  // vertices of the dual cloud are the non-redundant constraints; each hull
  // edge dualizes back to a vertex of the intersection polygon.
  std::vector<Vec2> dual(grid.m);
  for (int j = 0; j < grid.m; ++j) dual[j] = grid.dirs[j] * (1.0 / f[j]);
  std::vector<Vec2> hull = convex_hull(std::move(dual));
  const int n = static_cast<int>(hull.size());
  if (n < 3) {
    throw Error(ErrorCode::degenerate_wulff, "halfplane intersection has empty interior");
  }
  std::vector<Vec2> verts(n);
  for (int i = 0; i < n; ++i) {
    const Vec2 a = hull[i];
    const Vec2 b = hull[(i + 1) % n];
    const double det = cross(a, b);
    if (!(std::abs(det) > 0.0)) {
      throw Error(ErrorCode::degenerate_wulff, "parallel adjacent constraints");
    }
    // Solve <v,a> = 1, <v,b> = 1.
    verts[i] = {(b.y - a.y) / det, (a.x - b.x) / det};
  }
  SupportFunction out{grid, std::vector<double>(grid.m)};
  for (int j = 0; j < grid.m; ++j) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec2& v : verts) best = std::max(best, dot(v, grid.dirs[j]));
    out.h[j] = best;
  }
  return out;
}

SupportFunction q_sum(const SupportFunction& k, const SupportFunction& l, double q, double t) {
  if (!same_grid(k.grid, l.grid)) {
    throw Error(ErrorCode::grid_mismatch, "q_sum bodies on different grids");
  }
  if (!(q > 0.0) || q > 1.0) {
    throw Error(ErrorCode::parameter_domain, "q_sum requires q in (0,1]");
  }
  std::vector<double> f(k.grid.m);
  for (int j = 0; j < k.grid.m; ++j) {
    const double combined = std::pow(k.h[j], q) + t * std::pow(l.h[j], q);
    if (!(combined > 0.0)) {
      throw Error(ErrorCode::invalid_qsum, "combined support power nonpositive at index " + std::to_string(j));
    }
    f[j] = std::pow(combined, 1.0 / q);
  }
  return wulff_shape(k.grid, f);
}

double hausdorff(const SupportFunction& a, const SupportFunction& b) {
  if (!same_grid(a.grid, b.grid)) {
    throw Error(ErrorCode::grid_mismatch, "hausdorff bodies on different grids");
  }
  double d = 0.0;
  for (int j = 0; j < a.grid.m; ++j) d = std::max(d, std::abs(a.h[j] - b.h[j]));
  return d;
}

SupportFunction translate(const SupportFunction& k, Vec2 x0) {
  SupportFunction out = k;
  for (int j = 0; j < k.grid.m; ++j) {
    out.h[j] = k.h[j] + dot(x0, k.grid.dirs[j]);
    if (!(out.h[j] > 0.0)) {
      throw Error(ErrorCode::origin_not_interior, "translation moves origin outside the body");
    }
  }
  return out;
}

SupportFunction scale(const SupportFunction& k, double lambda) {
  if (!(lambda > 0.0)) {
    throw Error(ErrorCode::parameter_domain, "scale factor must be positive");
  }
  SupportFunction out = k;
  for (double& v : out.h) v *= lambda;
  return out;
}

SupportFunction apply(const SupportFunction& k, const BodyTransform& t) {
  return translate(scale(k, t.scale), t.translation);
}

double radial_function(const SupportFunction& k, double phi) {
  const Vec2 u{std::cos(phi), std::sin(phi)};
  double r = std::numeric_limits<double>::infinity();
  for (int j = 0; j < k.grid.m; ++j) {
    const double denom = dot(k.grid.dirs[j], u);
    if (denom > 1e-12) r = std::min(r, k.h[j] / denom);
  }
  return r;
}

namespace {

// Smoothed minimum of the slack h_j - <x, xi_j>, maximized by damped Newton.
// The smoothing scale is relative to the body size, so the maximizer is
// equivariant under translation and scaling up to rounding.
Vec2 softmin_center(const SupportFunction& k, double* radius_out) {
  const DirectionGrid& g = k.grid;
  const double scale_h = max_support(k);
  Vec2 x{0.0, 0.0};
  auto slack_min = [&](Vec2 p) {
    double r = std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.m; ++j) r = std::min(r, k.h[j] - dot(p, g.dirs[j]));
    return r;
  };
  auto smoothed = [&](Vec2 p, double beta) {
    const double smin = slack_min(p);
    double acc = 0.0;
    for (int j = 0; j < g.m; ++j) acc += std::exp(-beta * (k.h[j] - dot(p, g.dirs[j]) - smin));
    return smin - std::log(acc) / beta;
  };
  std::vector<double> w(g.m);
  for (double beta = 8.0 / scale_h; beta <= 3.6e7 / scale_h; beta *= 4.0) {
    for (int iter = 0; iter < 50; ++iter) {
      // Softmax weights of the tightest constraints.
      const double smin = slack_min(x);
      double wsum = 0.0;
      for (int j = 0; j < g.m; ++j) {
        const double s = k.h[j] - dot(x, g.dirs[j]);
        w[j] = std::exp(-beta * (s - smin));
        wsum += w[j];
      }
      Vec2 mean{0.0, 0.0};
      double hxx = 0.0, hxy = 0.0, hyy = 0.0;
      for (int j = 0; j < g.m; ++j) {
        w[j] /= wsum;
        mean = mean + g.dirs[j] * w[j];
        hxx += w[j] * g.dirs[j].x * g.dirs[j].x;
        hxy += w[j] * g.dirs[j].x * g.dirs[j].y;
        hyy += w[j] * g.dirs[j].y * g.dirs[j].y;
      }
      const Vec2 grad = -mean;
      // Hessian of the smoothed objective is -beta * Cov(xi).
      double axx = beta * (hxx - mean.x * mean.x) + 1e-10 / scale_h;
      double axy = beta * (hxy - mean.x * mean.y);
      double ayy = beta * (hyy - mean.y * mean.y) + 1e-10 / scale_h;
      const double det = axx * ayy - axy * axy;
      Vec2 step;
      if (det > 0.0) {
        step = {(ayy * grad.x - axy * grad.y) / det, (axx * grad.y - axy * grad.x) / det};
      } else {
        step = grad * (scale_h / 4.0);
      }
      const double f0 = smoothed(x, beta);
      double alpha = 1.0;
      Vec2 next = x;
      for (int ls = 0; ls < 40; ++ls) {
        const Vec2 cand = x + step * alpha;
        if (smoothed(cand, beta) >= f0) {
          next = cand;
          break;
        }
        alpha *= 0.5;
      }
      const double moved = (next - x).norm();
      x = next;
      if (moved <= 1e-13 * scale_h) break;
    }
  }
  if (radius_out) *radius_out = slack_min(x);
  return x;
}

}  // namespace

Vec2 chebyshev_center(const SupportFunction& k) { return softmin_center(k, nullptr); }

double inradius(const SupportFunction& k) {
  double r = 0.0;
  softmin_center(k, &r);
  return r;
}

double circumradius(const SupportFunction& k) {
  double r = 0.0;
  for (int j = 0; j < k.grid.m; ++j) r = std::max(r, boundary_point(k, j).norm());
  return r;
}

Vec2 steiner_point(const SupportFunction& k) {
  Vec2 s{0.0, 0.0};
  for (int j = 0; j < k.grid.m; ++j) s = s + k.grid.dirs[j] * k.h[j];
  return s * (k.grid.dtheta / std::numbers::pi);
}

double smooth_boundary_distance(const SupportFunction& k, Vec2 x) {
  const double kPower = 8.0;
  double acc = 0.0;
  for (int j = 0; j < k.grid.m; ++j) {
    const double slack = k.h[j] - dot(x, k.grid.dirs[j]);
    if (!(slack > 0.0)) {
      throw Error(ErrorCode::origin_not_interior, "reference point reaches the boundary");
    }
    acc += std::pow(slack, -kPower);
  }
  return std::pow(acc / k.grid.m, -1.0 / kPower);
}

double max_support(const SupportFunction& k) {
  return *std::max_element(k.h.begin(), k.h.end());
}

double min_support(const SupportFunction& k) {
  return *std::min_element(k.h.begin(), k.h.end());
}

std::uint64_t body_hash(const SupportFunction& k) {
  std::uint64_t hash = 1469598103934665603ull;
  auto mix = [&hash](const void* data, size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
      hash ^= bytes[i];
      hash *= 1099511628211ull;
    }
  };
  const std::uint64_t m = k.grid.m;
  mix(&m, sizeof(m));
  for (double v : k.h) mix(&v, sizeof(v));
  return hash;
}

}  // namespace pharm
