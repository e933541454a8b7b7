#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pharm/geometry.hpp"

namespace pharm {

// Generators for the reference body family used by the verification suites.

SupportFunction make_ball(const DirectionGrid& grid, double radius = 1.0, Vec2 center = {0.0, 0.0});
SupportFunction make_ellipse(const DirectionGrid& grid, double a, double b);
SupportFunction make_square(const DirectionGrid& grid, double half_width = 1.0);

/// Regular m-gon inscribed in a circle; a vertex sits at angle `phase`.
SupportFunction make_regular_polygon(const DirectionGrid& grid, int sides, double radius = 1.0,
                                     double phase = 0.0);

/// Square support smoothed by a periodic box filter and re-convexified.
SupportFunction make_rounded_square(const DirectionGrid& grid, double half_width = 1.0);

/// Asymmetric smooth convex body (low-order trigonometric support function).
SupportFunction make_egg(const DirectionGrid& grid);

/// Random smooth convex body; support is a positive trigonometric polynomial
/// passed through the Wulff construction.
SupportFunction make_random_body(const DirectionGrid& grid, std::uint64_t seed);

struct NamedBody {
  std::string name;
  SupportFunction body;
};

/// Bodies used by the centroid / translation / gradient-bound suites.
std::vector<NamedBody> standard_family(const DirectionGrid& grid);

}  // namespace pharm
