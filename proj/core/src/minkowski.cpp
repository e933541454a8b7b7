#include "pharm/minkowski.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pharm {

namespace {

std::vector<double> box3(const std::vector<double>& v) {
  const int m = static_cast<int>(v.size());
  std::vector<double> out(m);
  for (int j = 0; j < m; ++j) {
    out[j] = (v[(j + m - 1) % m] + v[j] + v[(j + 1) % m]) / 3.0;
  }
  return out;
}

double residual_from_densities(const std::vector<double>& mu, const std::vector<double>& lqd,
                               double c) {
  const std::vector<double> a = box3(mu);
  const std::vector<double> b = box3(lqd);
  double peak = 0.0;
  for (double v : a) peak = std::max(peak, v);
  if (!(peak > 0.0)) {
    throw Error(ErrorCode::degenerate_body, "target density vanishes");
  }
  double worst = 0.0;
  for (size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - c * b[j]));
  return worst / peak;
}

}  // namespace

double check_spread(const SphericalMeasure& mu) {
  const int probes = 4 * mu.grid.m;
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < probes; ++i) {
    const double a = 2.0 * std::numbers::pi * i / probes;
    const Vec2 v{std::cos(a), std::sin(a)};
    double acc = 0.0;
    for (int j = 0; j < mu.grid.m; ++j) {
      acc += mu.density[j] * std::max(dot(mu.grid.dirs[j], v), 0.0);
    }
    margin = std::min(margin, acc * mu.grid.dtheta);
  }
  return margin;
}

TargetMeasure make_target(SphericalMeasure mu) {
  for (double v : mu.density) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw Error(ErrorCode::parameter_domain, "target density must be finite and nonnegative");
    }
  }
  if (!(total_mass(mu) > 0.0)) {
    throw Error(ErrorCode::parameter_domain, "target measure has no mass");
  }
  mu.meta.provenance = Provenance::target;
  TargetMeasure t{std::move(mu), 0.0};
  t.spread_margin = check_spread(t.measure);
  return t;
}

double phi(const SupportFunction& q_body, Vec2 zeta, const SphericalMeasure& mu, double q) {
  if (!same_grid(q_body.grid, mu.grid)) {
    throw Error(ErrorCode::grid_mismatch, "body and target on different grids");
  }
  double acc = 0.0;
  for (int j = 0; j < q_body.grid.m; ++j) {
    const double base = q_body.h[j] - dot(zeta, q_body.grid.dirs[j]);
    if (!(base > 0.0)) {
      throw Error(ErrorCode::zeta_not_interior, "zeta reaches the boundary of Q");
    }
    acc += std::pow(base, q) * mu.density[j];
  }
  return acc * q_body.grid.dtheta;
}

Vec2 optimal_center(const SupportFunction& q_body, const SphericalMeasure& mu, double q,
                    const SolverConfig& cfg) {
  if (!same_grid(q_body.grid, mu.grid)) {
    throw Error(ErrorCode::grid_mismatch, "body and target on different grids");
  }
  const DirectionGrid& g = q_body.grid;
  const double mass = total_mass(mu);
  const double tol = cfg.tol_center * mass;
  Vec2 zeta = steiner_point(q_body);

  for (int iter = 0; iter < cfg.max_center_iters; ++iter) {
    Vec2 grad{0.0, 0.0};
    double hxx = 0.0, hxy = 0.0, hyy = 0.0;
    for (int j = 0; j < g.m; ++j) {
      const double base = q_body.h[j] - dot(zeta, g.dirs[j]);
      const double w = std::pow(base, q - 1.0) * mu.density[j] * g.dtheta;
      grad = grad - g.dirs[j] * (q * w);
      const double hw = q * (1.0 - q) * w / base;
      hxx += hw * g.dirs[j].x * g.dirs[j].x;
      hxy += hw * g.dirs[j].x * g.dirs[j].y;
      hyy += hw * g.dirs[j].y * g.dirs[j].y;
    }
    if (grad.norm() <= tol) return zeta;

    // Newton ascent on the strictly concave Phi; Hessian is -H with H spd.
    Vec2 dir;
    const double det = hxx * hyy - hxy * hxy;
    if (det > 0.0) {
      dir = {(hyy * grad.x - hxy * grad.y) / det, (hxx * grad.y - hxy * grad.x) / det};
    } else {
      dir = grad * (max_support(q_body) / (mass + 1e-300));
    }

    // Fraction-to-boundary cap, then backtrack on the objective.
    double alpha_max = std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.m; ++j) {
      const double slope = dot(dir, g.dirs[j]);
      if (slope > 0.0) {
        const double base = q_body.h[j] - dot(zeta, g.dirs[j]);
        alpha_max = std::min(alpha_max, base / slope);
      }
    }
    double alpha = std::min(1.0, 0.9 * alpha_max);
    const double f0 = phi(q_body, zeta, mu, q);
    bool moved = false;
    for (int ls = 0; ls < 50; ++ls) {
      const Vec2 cand = zeta + dir * alpha;
      double fc = -std::numeric_limits<double>::infinity();
      try {
        fc = phi(q_body, cand, mu, q);
      } catch (const Error&) {
      }
      if (fc >= f0) {
        zeta = cand;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved || alpha * dir.norm() <= 1e-16 * max_support(q_body)) {
      // Stationary within line-search resolution; accept if the gradient is
      // already small relative to a loose multiple of the tolerance.
      if (grad.norm() <= 1e3 * tol) return zeta;
      throw Error(ErrorCode::center_no_convergence, "inner maximizer stalled");
    }
  }
  throw Error(ErrorCode::center_no_convergence, "inner maximizer iteration cap reached");
}

SupportFunction normalize_gamma(const SupportFunction& q_body, const MeasureConfig& cfg) {
  const double degree = cfg.n - cfg.annulus.p + 1.0;
  if (std::abs(degree) < 1e-12) {
    throw Error(ErrorCode::normalization_undefined, "p = n + 1 leaves Gamma scale-invariant");
  }
  const SupportFunction ball = support_of_ball(1.0, {0.0, 0.0}, q_body.grid);
  const double gamma_ball = gamma_functional(ball, cfg);
  double gamma_q = gamma_functional(q_body, cfg);
  if (!(gamma_q > 0.0)) {
    throw Error(ErrorCode::degenerate_body, "Gamma is not positive");
  }
  SupportFunction out = scale(q_body, std::pow(gamma_ball / gamma_q, 1.0 / degree));
  gamma_q = gamma_functional(out, cfg);
  if (std::abs(gamma_q - gamma_ball) > 0.01 * gamma_ball) {
    out = scale(out, std::pow(gamma_ball / gamma_q, 1.0 / degree));
  }
  return out;
}

double objective(const SupportFunction& q_body, const SphericalMeasure& mu, double q,
                 const SolverConfig& cfg) {
  return phi(q_body, optimal_center(q_body, mu, q, cfg), mu, q);
}

double stationarity_residual(const SupportFunction& omega, double c, const SphericalMeasure& mu,
                             double q, const MeasureConfig& cfg) {
  if (!same_grid(omega.grid, mu.grid)) {
    throw Error(ErrorCode::grid_mismatch, "body and target on different grids");
  }
  const SphericalMeasure lqd = lq_measure(omega, q, cfg);
  return residual_from_densities(mu.density, lqd.density, c);
}

SupportFunction rescale_to_unit_constant(const SupportFunction& omega, double c, double p,
                                         double q, int n) {
  const double degree = n - p + 1.0 - q;
  if (std::abs(degree) < 1e-12) {
    throw Error(ErrorCode::rescale_undefined, "p = n + 1 - q leaves the constant invariant");
  }
  if (!(c > 0.0)) {
    throw Error(ErrorCode::parameter_domain, "constant must be positive");
  }
  return scale(omega, std::pow(c, 1.0 / degree));
}

TargetMeasure synth_target(const SupportFunction& omega_star, double q, const MeasureConfig& cfg) {
  SphericalMeasure lqd = lq_measure(omega_star, q, cfg);
  const double mass = total_mass(lqd);
  for (double& v : lqd.density) v /= mass;
  lqd.meta.provenance = Provenance::target;
  return make_target(std::move(lqd));
}

MinkowskiSolution solve_minkowski(const TargetMeasure& target, double p, double q,
                                  const MeasureConfig& cfg, const SolverConfig& scfg) {
  if (!(q > 0.0) || !(q < 1.0)) {
    throw Error(ErrorCode::parameter_domain, "solver requires 0 < q < 1");
  }
  if (!(p > 1.0) || std::abs(p - (cfg.n + 1.0)) < 1e-12) {
    throw Error(ErrorCode::parameter_domain, "solver requires 1 < p != n + 1");
  }
  const SphericalMeasure& mu = target.measure;
  if (!(target.spread_margin > 1e-10 * total_mass(mu))) {
    throw Error(ErrorCode::hemisphere_concentrated, "target concentrates on a closed hemisphere");
  }

  MeasureConfig mcfg = cfg;
  mcfg.annulus.p = p;
  const double degree = mcfg.n - p + 1.0;
  const DirectionGrid& grid = mu.grid;
  const double dtheta = grid.dtheta;

  SupportFunction q_cur = support_of_ball(1.0, {0.0, 0.0}, grid);
  std::vector<double> field;
  SphericalMeasure meas = pharmonic_measure(q_cur, mcfg, nullptr, &field);
  const double gamma_ball = gamma_from_measure(q_cur, meas);

  MinkowskiSolution sol;
  Vec2 zeta{0.0, 0.0};
  double c_cur = 0.0;
  double residual = std::numeric_limits<double>::infinity();

  int iter = 0;
  for (; iter <= scfg.max_outer; ++iter) {
    const double gamma_q = gamma_from_measure(q_cur, meas);
    zeta = optimal_center(q_cur, mu, q, scfg);
    std::vector<double> bases(grid.m);
    double obj = 0.0;
    for (int j = 0; j < grid.m; ++j) {
      bases[j] = q_cur.h[j] - dot(zeta, grid.dirs[j]);
      obj += std::pow(bases[j], q) * mu.density[j];
    }
    obj *= dtheta;
    c_cur = obj / gamma_ball;

    std::vector<double> lqd(grid.m);
    for (int j = 0; j < grid.m; ++j) {
      lqd[j] = std::pow(bases[j], 1.0 - q) * meas.density[j];
    }
    residual = residual_from_densities(mu.density, lqd, c_cur);
    sol.trace.push_back({iter, obj, residual, gamma_q});
    if (residual <= scfg.tol_solve || iter == scfg.max_outer) break;

    // Danskin gradient of the sup objective in the support values, projected
    // on the Gamma level set (first-order response of Gamma to a support
    // perturbation v is (n-p+1) * integral of v dmu).
    std::vector<double> grad(grid.m);
    double gh = 0.0;
    for (int j = 0; j < grid.m; ++j) {
      grad[j] = q * std::pow(bases[j], q - 1.0) * mu.density[j] * dtheta;
      gh += grad[j] * q_cur.h[j];
    }
    double gmax = 0.0;
    for (int j = 0; j < grid.m; ++j) {
      grad[j] -= gh / gamma_q * meas.density[j] * dtheta;
      gmax = std::max(gmax, std::abs(grad[j]));
    }
    if (gmax <= 1e-14 * max_support(q_cur)) break;

    double mean_h = 0.0;
    for (double v : q_cur.h) mean_h += v;
    mean_h /= grid.m;

    double eta = 0.5 * mean_h / gmax;
    bool accepted = false;
    SupportFunction q_next;
    std::vector<double> field_next;
    while (eta >= scfg.step_floor) {
      std::vector<double> h_try(grid.m);
      bool positive = true;
      for (int j = 0; j < grid.m; ++j) {
        h_try[j] = q_cur.h[j] - eta * grad[j];
        positive = positive && h_try[j] > 0.0;
      }
      if (positive) {
        try {
          const SupportFunction q_try = wulff_shape(grid, h_try);
          std::vector<double> field_try = field;
          const SphericalMeasure meas_try = pharmonic_measure(q_try, mcfg, &field, &field_try);
          const double gamma_try = gamma_from_measure(q_try, meas_try);
          const SupportFunction q_norm =
              scale(q_try, std::pow(gamma_ball / gamma_try, 1.0 / degree));
          const double obj_try = objective(q_norm, mu, q, scfg);
          if (obj_try <= obj + 1e-12) {
            q_next = q_norm;
            field_next = std::move(field_try);
            accepted = true;
            break;
          }
        } catch (const Error&) {
          // convexity or solver failure at this step size
        }
      }
      eta *= 0.5;
    }
    if (!accepted) break;  // no descent direction left at the step floor

    q_cur = std::move(q_next);
    field = std::move(field_next);
    meas = pharmonic_measure(q_cur, mcfg, &field, &field);
    double gamma_new = gamma_from_measure(q_cur, meas);
    if (std::abs(gamma_new - gamma_ball) > scfg.tol_norm * gamma_ball) {
      q_cur = scale(q_cur, std::pow(gamma_ball / gamma_new, 1.0 / degree));
      meas = pharmonic_measure(q_cur, mcfg, &field, &field);
    }
  }

  sol.omega = translate(q_cur, -zeta);
  sol.c = c_cur;
  sol.residual = residual;
  sol.iterations = iter;
  sol.converged = residual <= scfg.tol_solve;
  return sol;
}

}  // namespace pharm
