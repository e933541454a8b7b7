#include "pharm/bodies.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace pharm {

SupportFunction make_ball(const DirectionGrid& grid, double radius, Vec2 center) {
  return support_of_ball(radius, center, grid);
}

SupportFunction make_ellipse(const DirectionGrid& grid, double a, double b) {
  return support_of_ellipse(a, b, grid);
}

SupportFunction make_square(const DirectionGrid& grid, double half_width) {
  const double w = half_width;
  const std::vector<Vec2> verts{{w, w}, {-w, w}, {-w, -w}, {w, -w}};
  return support_of_polygon(verts, grid);
}

SupportFunction make_regular_polygon(const DirectionGrid& grid, int sides, double radius,
                                     double phase) {
  std::vector<Vec2> verts(sides);
  for (int i = 0; i < sides; ++i) {
    const double a = phase + 2.0 * std::numbers::pi * i / sides;
    verts[i] = {radius * std::cos(a), radius * std::sin(a)};
  }
  return support_of_polygon(verts, grid);
}

SupportFunction make_rounded_square(const DirectionGrid& grid, double half_width) {
  SupportFunction sq = make_square(grid, half_width);
  std::vector<double> f = sq.h;
  const int m = grid.m;
  const int width = std::max(1, m / 32);
  for (int pass = 0; pass < 3; ++pass) {
    std::vector<double> g(m, 0.0);
    for (int j = 0; j < m; ++j) {
      double acc = 0.0;
      for (int d = -width; d <= width; ++d) acc += f[grid.wrap(j + d)];
      g[j] = acc / (2 * width + 1);
    }
    f = std::move(g);
  }
  return wulff_shape(grid, f);
}

SupportFunction make_egg(const DirectionGrid& grid) {
  std::vector<double> f(grid.m);
  for (int j = 0; j < grid.m; ++j) {
    const double t = grid.angles[j];
    f[j] = 1.0 + 0.15 * std::cos(t) + 0.10 * std::sin(2.0 * t) + 0.05 * std::cos(3.0 * t);
  }
  return wulff_shape(grid, f);
}

SupportFunction make_random_body(const DirectionGrid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int kmax = 4;
  std::vector<double> a(kmax + 1, 0.0), b(kmax + 1, 0.0);
  for (int k = 1; k <= kmax; ++k) {
    // Keep the trig polynomial well inside positivity.
    const double amp = 0.35 / (kmax * (k * k + 1));
    a[k] = amp * unit(rng);
    b[k] = amp * unit(rng);
  }
  std::vector<double> f(grid.m);
  for (int j = 0; j < grid.m; ++j) {
    const double t = grid.angles[j];
    double v = 1.0;
    for (int k = 1; k <= kmax; ++k) v += a[k] * std::cos(k * t) + b[k] * std::sin(k * t);
    f[j] = v;
  }
  return wulff_shape(grid, f);
}

std::vector<NamedBody> standard_family(const DirectionGrid& grid) {
  std::vector<NamedBody> family;
  family.push_back({"ball", make_ball(grid)});
  family.push_back({"ellipse_1.5_1", make_ellipse(grid, 1.5, 1.0)});
  family.push_back({"ellipse_2_1", make_ellipse(grid, 2.0, 1.0)});
  family.push_back({"rounded_square", make_rounded_square(grid)});
  family.push_back({"translated_ellipse", translate(make_ellipse(grid, 1.5, 1.0), {0.2, 0.1})});
  family.push_back({"egg", make_egg(grid)});
  return family;
}

}  // namespace pharm
