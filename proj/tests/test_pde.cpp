#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "pharm/bodies.hpp"
#include "pharm/pde.hpp"

using namespace pharm;

namespace {

AnnulusConfig test_config(double p, int ns = 64, int ntheta = 128) {
  AnnulusConfig cfg;
  cfg.p = p;
  cfg.ns = ns;
  cfg.ntheta = ntheta;
  cfg.obstacle = Obstacle{{0.0, 0.0}, 0.5};
  return cfg;
}

// Trace the u >= level set along each ray by linear interpolation.
std::vector<Vec2> level_set(const AnnulusMesh& mesh, const std::vector<double>& u, double level) {
  std::vector<Vec2> pts(mesh.ntheta);
  for (int j = 0; j < mesh.ntheta; ++j) {
    double r = mesh.rho;
    for (int i = 0; i < mesh.ns; ++i) {
      const double a = u[mesh.node_id(i, j)];
      const double b = u[mesh.node_id(i + 1, j)];
      if (a >= level && b <= level) {
        const double w = (a - level) / std::max(a - b, 1e-300);
        const double span = (mesh.outer_radius[j] - mesh.rho) / mesh.ns;
        r = mesh.rho + (i + w) * span;
        break;
      }
    }
    const double t = mesh.dtheta * j;
    pts[j] = mesh.center + Vec2{r * std::cos(t), r * std::sin(t)};
  }
  return pts;
}

}  // namespace

TEST_CASE("radial oracle closed forms") {
  const RadialOracle o2 = radial_oracle(1.0, 0.5, 2.0);
  CHECK(o2.boundary_gradient() == doctest::Approx(1.0 / std::log(2.0)));
  CHECK(o2.u(0.5) == doctest::Approx(1.0));
  CHECK(o2.u(1.0) == doctest::Approx(0.0));

  const RadialOracle o15 = radial_oracle(1.0, 0.5, 1.5);
  CHECK(o15.alpha == doctest::Approx(-1.0));
  CHECK(o15.boundary_gradient() == doctest::Approx(1.0));
  CHECK(o15.u(0.8) == doctest::Approx(1.0 / 0.8 - 1.0));

  const RadialOracle o4 = radial_oracle(1.0, 0.5, 4.0);
  CHECK(o4.alpha == doctest::Approx(2.0 / 3.0));
  CHECK(o4.boundary_gradient() ==
        doctest::Approx((2.0 / 3.0) / (1.0 - std::pow(0.5, 2.0 / 3.0))));
  // Frozen value of the closed form.
  CHECK(o4.boundary_gradient() == doctest::Approx(1.801609589280).epsilon(1e-9));

  const RadialOracle big = radial_oracle(2.0, 1.0, 2.0);
  CHECK(big.boundary_gradient() == doctest::Approx(1.0 / (2.0 * std::log(2.0))));

  CHECK_THROWS_AS(radial_oracle(1.0, 1.5, 2.0), Error);
}

TEST_CASE("mesh construction") {
  const DirectionGrid g = make_grid(128);
  const SupportFunction ball = make_ball(g);

  AnnulusConfig cfg = test_config(2.0, 4, 8);
  const AnnulusMesh mesh = build_mesh(ball, cfg);
  for (int i = 0; i <= 4; ++i) {
    const double expected = 0.5 + 0.125 * i;
    CHECK(mesh.node(i, 0).norm() == doctest::Approx(expected));
  }

  // Oversized obstacle is rejected.
  cfg.obstacle = Obstacle{{0.0, 0.0}, 0.99};
  CHECK_THROWS_AS(build_mesh(ball, cfg), Error);

  // Outer ring follows the radial function of the body.
  const SupportFunction e = make_ellipse(g, 2.0, 1.0);
  AnnulusConfig ecfg = test_config(2.0, 8, 64);
  const AnnulusMesh emesh = build_mesh(e, ecfg);
  for (int j = 0; j < emesh.ntheta; j += 5) {
    const double t = emesh.dtheta * j;
    const double c = std::cos(t), s = std::sin(t);
    const double exact = 2.0 / std::sqrt(c * c + 4.0 * s * s);  // a b / sqrt(b^2 c^2 + a^2 s^2)
    CHECK(emesh.outer_radius[j] == doctest::Approx(exact).epsilon(5e-3));
    CHECK(emesh.outer_radius[j] ==
          doctest::Approx(radial_function(e, t)).epsilon(5e-3));
  }
}

TEST_CASE("harmonic annulus matches log solution") {
  const DirectionGrid g = make_grid(128);
  const SupportFunction ball = make_ball(g);
  const AnnulusConfig cfg = test_config(2.0);
  const AnnulusMesh mesh = build_mesh(ball, cfg);
  const PHarmonicSolution sol = solve_plaplace(mesh, cfg);
  const RadialOracle oracle = radial_oracle(1.0, 0.5, 2.0);

  CHECK(sol.iterations <= 2);  // constant coefficients converge immediately
  double max_err = 0.0;
  for (int i = 0; i <= mesh.ns; ++i) {
    const double r = mesh.node(i, 0).norm();
    max_err = std::max(max_err, std::abs(sol.u[mesh.node_id(i, 0)] - oracle.u(r)));
  }
  CHECK(max_err <= 0.01);

  const auto grad = boundary_gradient(sol, mesh, ball);
  for (double v : grad) CHECK(v == doctest::Approx(oracle.boundary_gradient()).epsilon(0.01));
}

TEST_CASE("p-harmonic annulus matches power solution") {
  const DirectionGrid g = make_grid(128);
  const SupportFunction ball = make_ball(g);
  for (double p : {1.5, 2.5, 4.0}) {
    const AnnulusConfig cfg = test_config(p);
    const AnnulusMesh mesh = build_mesh(ball, cfg);
    const PHarmonicSolution sol = solve_plaplace(mesh, cfg);
    const RadialOracle oracle = radial_oracle(1.0, 0.5, p);

    double max_err = 0.0;
    for (int i = 0; i <= mesh.ns; ++i) {
      const double r = mesh.node(i, 7).norm();
      max_err = std::max(max_err, std::abs(sol.u[mesh.node_id(i, 7)] - oracle.u(r)));
    }
    CAPTURE(p);
    CHECK(max_err <= 0.01);
    const auto grad = boundary_gradient(sol, mesh, ball);
    for (double v : grad) CHECK(v == doctest::Approx(oracle.boundary_gradient()).epsilon(0.01));
  }
}

TEST_CASE("scaled annulus gradient") {
  const DirectionGrid g = make_grid(128);
  const SupportFunction ball2 = make_ball(g, 2.0);
  AnnulusConfig cfg = test_config(2.0);
  cfg.obstacle = Obstacle{{0.0, 0.0}, 1.0};
  const PHarmonicSolution sol = solve_annulus(ball2, cfg);
  const double expected = 1.0 / (2.0 * std::log(2.0));
  for (double v : sol.boundary_gradient) CHECK(v == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("maximum principle and ray monotonicity") {
  const DirectionGrid g = make_grid(128);
  for (double p : {1.5, 2.0, 2.5}) {
    AnnulusConfig cfg = test_config(p, 32, 96);
    cfg.obstacle.reset();  // automatic placement
    const SupportFunction body = make_ellipse(g, 1.5, 1.0);
    const AnnulusMesh mesh = build_mesh(body, cfg);
    const PHarmonicSolution sol = solve_plaplace(mesh, cfg);
    for (double v : sol.u) {
      CHECK(v >= -1e-10);
      CHECK(v <= 1.0 + 1e-10);
    }
    for (int j = 0; j < mesh.ntheta; ++j) {
      for (int i = 0; i < mesh.ns; ++i) {
        CHECK(sol.u[mesh.node_id(i + 1, j)] <= sol.u[mesh.node_id(i, j)] + 1e-10);
      }
    }
  }
}

TEST_CASE("level set of the capacitary potential is convex") {
  const DirectionGrid g = make_grid(128);
  AnnulusConfig cfg = test_config(1.5, 48, 128);
  cfg.obstacle.reset();
  const SupportFunction body = make_ellipse(g, 1.5, 1.0);
  const AnnulusMesh mesh = build_mesh(body, cfg);
  const PHarmonicSolution sol = solve_plaplace(mesh, cfg);
  const std::vector<Vec2> pts = level_set(mesh, sol.u, 0.5);

  // Every traced point should lie on (not inside) the hull of the trace,
  // up to a couple of mesh cells.
  const SupportFunction hull = support_of_polygon(pts, g);
  const double tol = 2.0 * (mesh.outer_radius[0] - mesh.rho) / mesh.ns;
  for (int j = 0; j < mesh.ntheta; ++j) {
    const Vec2 d = pts[j] - mesh.center;
    const double r = d.norm();
    const double hull_r = radial_function(translate(hull, -mesh.center), std::atan2(d.y, d.x));
    CHECK(hull_r - r <= tol);
  }
}

TEST_CASE("uniform gradient bound via comparison with the radial oracle") {
  const DirectionGrid g = make_grid(128);
  AnnulusConfig cfg = test_config(2.0, 48, 128);
  const double rho = 0.4;
  cfg.obstacle = Obstacle{{0.0, 0.0}, rho};

  for (const auto& [name, body] : standard_family(g)) {
    // Distance from the obstacle center to the boundary.
    double dist = 1e300;
    for (int j = 0; j < g.m; ++j) dist = std::min(dist, body.h[j]);
    const double bound = radial_oracle(dist, rho, cfg.p).obstacle_gradient();
    const PHarmonicSolution sol = solve_annulus(body, cfg);
    double max_grad = 0.0;
    for (double v : sol.boundary_gradient) max_grad = std::max(max_grad, v);
    CAPTURE(name);
    CHECK(max_grad <= bound * 1.02);
  }
}

TEST_CASE("mesh refinement converges at second order") {
  const DirectionGrid g = make_grid(128);
  const SupportFunction ball = make_ball(g);
  for (double p : {2.0, 1.5}) {
    std::vector<double> errs;
    for (int ns : {16, 32, 64}) {
      AnnulusConfig cfg = test_config(p, ns, 4 * ns);
      const PHarmonicSolution sol = solve_annulus(ball, cfg);
      const double exact = radial_oracle(1.0, 0.5, p).boundary_gradient();
      double err = 0.0;
      for (double v : sol.boundary_gradient) err = std::max(err, std::abs(v - exact) / exact);
      errs.push_back(err);
    }
    CAPTURE(p);
    CHECK(std::log2(errs[0] / errs[1]) >= 1.5);
    CHECK(std::log2(errs[1] / errs[2]) >= 1.5);
  }
}

TEST_CASE("body convergence carries the boundary gradient") {
  const DirectionGrid g = make_grid(256);
  AnnulusConfig cfg = test_config(2.0, 32, 128);
  const SupportFunction ball = make_ball(g);
  const PHarmonicSolution ref = solve_annulus(ball, cfg);

  double prev = 1e300;
  for (int m : {8, 16, 32, 64}) {
    const SupportFunction gon = make_regular_polygon(g, m);
    const PHarmonicSolution sol = solve_annulus(gon, cfg);
    double dev = 0.0;
    for (int j = 0; j < g.m; ++j) {
      dev = std::max(dev, std::abs(sol.boundary_gradient[j] - ref.boundary_gradient[j]));
    }
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev <= 0.05);
}

TEST_CASE("eccentric annulus matches the Mobius closed form") {
  // Unit disk, obstacle disk center (alpha, 0): map to a concentric annulus
  // by the Mobius transform fixing the coaxial pencil's limiting points.
  const double alpha = 0.3, rho = 0.4;
  const double b = 1.0 + alpha * alpha - rho * rho;
  const double s = (b - std::sqrt(b * b - 4.0 * alpha * alpha)) / (2.0 * alpha);
  const double r0 = std::abs((alpha + rho - s) / (1.0 - s * (alpha + rho)));

  const DirectionGrid g = make_grid(256);
  const SupportFunction ball = make_ball(g);
  AnnulusConfig cfg = test_config(2.0, 64, 256);
  cfg.obstacle = Obstacle{{alpha, 0.0}, rho};
  const PHarmonicSolution sol = solve_annulus(ball, cfg);
  for (int j = 0; j < g.m; ++j) {
    const double th = g.angles[j];
    const double exact =
        (1.0 - s * s) / ((1.0 - 2.0 * s * std::cos(th) + s * s) * std::abs(std::log(r0)));
    CHECK(sol.boundary_gradient[j] == doctest::Approx(exact).epsilon(0.01));
  }
}

TEST_CASE("interpolation rejects points off the mesh") {
  const DirectionGrid g = make_grid(64);
  const SupportFunction ball = make_ball(g);
  const AnnulusConfig cfg = test_config(2.0, 8, 32);
  const AnnulusMesh mesh = build_mesh(ball, cfg);
  const PHarmonicSolution sol = solve_plaplace(mesh, cfg);
  CHECK_THROWS_AS(interpolate(mesh, sol.u, Vec2{3.0, 0.0}), Error);
  CHECK_THROWS_AS(interpolate(mesh, sol.u, Vec2{0.01, 0.0}), Error);
}
