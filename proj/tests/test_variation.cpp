#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "pharm/bodies.hpp"
#include "pharm/variation.hpp"

using namespace pharm;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

MeasureConfig test_config(double p, int ns = 48, int ntheta = 128) {
  MeasureConfig cfg;
  cfg.annulus.p = p;
  cfg.annulus.ns = ns;
  cfg.annulus.ntheta = ntheta;
  return cfg;
}

}  // namespace

TEST_CASE("gamma along the scaling path") {
  const DirectionGrid g = make_grid(128);
  const SupportFunction ball = make_ball(g);
  MeasureConfig cfg = test_config(1.5);
  cfg.annulus.obstacle = Obstacle{{0.0, 0.0}, 0.5};

  const double g0 = gamma_functional(ball, cfg);
  CHECK(g0 == doctest::Approx(kTwoPi).epsilon(0.01));
  CHECK(gamma_on_path(ball, ball, 0.5, 0.0, cfg) == doctest::Approx(g0).epsilon(1e-10));

  // L = K scales: Gamma((1+t)^{1/q} K) = (1+t)^{(n-p+1)/q} Gamma(K).
  const double t = 0.1;
  const double expected = std::pow(1.1, (2.0 - 1.5 + 1.0) / 0.5) * kTwoPi;
  CHECK(gamma_on_path(ball, ball, 0.5, t, cfg) == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("concentric-ball paths match the closed form") {
  // K and L concentric balls: K^t is the ball of radius (1 + t 2^q)^{1/q},
  // so both sides of the variational identity have closed forms.
  const DirectionGrid g = make_grid(128);
  const SupportFunction ball = make_ball(g);
  const SupportFunction ball2 = make_ball(g, 2.0);
  for (double p : {2.0, 1.5}) {
    const MeasureConfig cfg = test_config(p);
    const double q = 0.5;
    const double mass = total_mass(pharmonic_measure(ball, cfg));
    const double expected = (2.0 - p + 1.0) / q * std::pow(2.0, q) * mass;
    const double fd = fd_derivative(ball, ball2, q, cfg, 1e-3);
    CAPTURE(p);
    CHECK(fd == doctest::Approx(expected).epsilon(0.01));
    CHECK(formula_derivative(ball, ball2, q, cfg) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("self-consistency for L equal K") {
  const DirectionGrid g = make_grid(128);
  const MeasureConfig base = test_config(2.0);
  const SupportFunction bodies[] = {make_ball(g), make_ellipse(g, 1.5, 1.0)};
  for (const auto& k : bodies) {
    for (double p : {1.5, 2.0, 2.5, 4.0}) {
      MeasureConfig cfg = base;
      cfg.annulus.p = p;
      const double gamma0 = gamma_functional(k, cfg);
      for (double q : {0.3, 0.5, 0.9}) {
        const double expected = (2.0 - p + 1.0) / q * gamma0;
        const double formula = formula_derivative(k, k, q, cfg);
        CHECK(formula == doctest::Approx(expected).epsilon(1e-10));
        const double fd = fd_derivative(k, k, q, cfg, 1e-3);
        CHECK(fd == doctest::Approx(expected).epsilon(0.02));
      }
    }
  }
}

TEST_CASE("finite differences converge at second order") {
  const DirectionGrid g = make_grid(128);
  const MeasureConfig cfg = test_config(1.5);
  const SupportFunction ball = make_ball(g);
  const double q = 0.3;
  // The discrete path is exactly (1+t)^{(n-p+1)/q} Gamma, so truncation
  // dominates and the plain central difference shows its order cleanly.
  const double exact = (2.0 - 1.5 + 1.0) / q * gamma_functional(ball, cfg);
  const double e1 = std::abs(fd_derivative(ball, ball, q, cfg, 0.04, false) - exact);
  const double e2 = std::abs(fd_derivative(ball, ball, q, cfg, 0.02, false) - exact);
  CHECK(std::log2(e1 / e2) >= 2.0);
  CHECK(std::log2(e1 / e2) <= 2.5);
}

TEST_CASE("degenerate exponent p = n + 1") {
  const DirectionGrid g = make_grid(128);
  const MeasureConfig cfg = test_config(3.0);
  const SupportFunction ball = make_ball(g);
  const SupportFunction ell = make_ellipse(g, 1.5, 1.0);
  CHECK(formula_derivative(ball, ell, 0.5, cfg) == doctest::Approx(0.0));
  // Both sides vanish; the relative-error floor keeps the report finite.
  VariationConfig vcfg;
  vcfg.delta = 5e-3;
  const VariationReport rep = verify_variation(ball, ell, 0.5, cfg, vcfg, "ball", "ellipse");
  CHECK(std::abs(rep.formula_value) <= 1e-12);
  CHECK(std::isfinite(rep.rel_error));
}

TEST_CASE("verify_variation ball pair") {
  const DirectionGrid g = make_grid(128);
  const MeasureConfig cfg = test_config(2.0);
  const SupportFunction ball = make_ball(g);
  VariationConfig vcfg;
  const VariationReport rep = verify_variation(ball, ball, 0.5, cfg, vcfg, "ball", "ball");
  CHECK(rep.pass);
  CHECK(rep.rel_error <= 0.02);
  CHECK(!rep.step_warning);
  CHECK(rep.richardson_used);
}

TEST_CASE("verify_variation heterogeneous pair") {
  const DirectionGrid g = make_grid(128);
  const MeasureConfig cfg = test_config(2.0, 48, 192);
  const SupportFunction k = make_ball(g);
  const SupportFunction l = make_ellipse(g, 1.5, 1.0);
  VariationConfig vcfg;
  vcfg.tol_var = 0.03;
  const VariationReport rep = verify_variation(k, l, 0.5, cfg, vcfg, "ball", "ellipse");
  CAPTURE(rep.fd_value);
  CAPTURE(rep.formula_value);
  CHECK(rep.rel_error <= 0.03);
  CHECK(rep.pass);
}
