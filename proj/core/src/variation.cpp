#include "pharm/variation.hpp"

#include <cmath>
#include <future>

namespace pharm {

namespace {

bool same_body(const SupportFunction& k, const SupportFunction& l) {
  if (!same_grid(k.grid, l.grid)) return false;
  return hausdorff(k, l) <= 1e-14 * max_support(k);
}

// L = K is a pure dilation; the whole configuration scales with the body,
// including an explicitly pinned obstacle.
double scaling_gamma(const SupportFunction& k, double q, double t, const MeasureConfig& cfg) {
  const double lambda = std::pow(1.0 + t, 1.0 / q);
  MeasureConfig use = cfg;
  if (use.annulus.obstacle) {
    use.annulus.obstacle =
        Obstacle{use.annulus.obstacle->center * lambda, use.annulus.obstacle->rho * lambda};
  }
  return gamma_functional(scale(k, lambda), use);
}

// Heterogeneous paths evaluate Gamma as the same body functional used
// everywhere else: the obstacle is re-resolved from each path body. Pinning
// the obstacle instead breaks the identity already for round annuli, where
// d/dR of 2 pi R / log(R/rho) has the wrong size and sign; the automatic
// placement keeps every dilation path exact.
MeasureConfig canonical_config(const MeasureConfig& cfg) {
  MeasureConfig use = cfg;
  use.annulus.obstacle.reset();
  return use;
}

}  // namespace

double gamma_on_path(const SupportFunction& k, const SupportFunction& l, double q, double t,
                     const MeasureConfig& cfg) {
  if (same_body(k, l)) return scaling_gamma(k, q, t, cfg);
  return gamma_functional(q_sum(k, l, q, t), canonical_config(cfg));
}

double fd_derivative(const SupportFunction& k, const SupportFunction& l, double q,
                     const MeasureConfig& cfg, double delta, bool richardson,
                     bool* step_warning) {
  if (!(delta > 0.0)) {
    throw Error(ErrorCode::parameter_domain, "finite-difference step must be positive");
  }
  auto gamma_at = [&](double t) { return gamma_on_path(k, l, q, t, cfg); };

  if (!richardson) {
    auto plus = std::async(std::launch::async, gamma_at, delta);
    auto minus = std::async(std::launch::async, gamma_at, -delta);
    if (step_warning) *step_warning = false;
    return (plus.get() - minus.get()) / (2.0 * delta);
  }

  auto p1 = std::async(std::launch::async, gamma_at, delta);
  auto m1 = std::async(std::launch::async, gamma_at, -delta);
  auto p2 = std::async(std::launch::async, gamma_at, delta / 2.0);
  auto m2 = std::async(std::launch::async, gamma_at, -delta / 2.0);
  const double coarse = (p1.get() - m1.get()) / (2.0 * delta);
  const double fine = (p2.get() - m2.get()) / delta;
  if (step_warning) {
    const double mismatch = std::abs(coarse - fine) / std::max(std::abs(fine), 1e-8);
    *step_warning = mismatch > 0.2;
  }
  return (4.0 * fine - coarse) / 3.0;
}

double formula_from_measure(const SupportFunction& k, const SupportFunction& l, double q,
                            const SphericalMeasure& mu_k, int n, double p) {
  if (!same_grid(k.grid, l.grid) || !same_grid(k.grid, mu_k.grid)) {
    throw Error(ErrorCode::grid_mismatch, "formula derivative needs a shared grid");
  }
  double acc = 0.0;
  for (int j = 0; j < k.grid.m; ++j) {
    acc += std::pow(l.h[j], q) * std::pow(k.h[j], 1.0 - q) * mu_k.density[j];
  }
  return (n - p + 1.0) / q * acc * k.grid.dtheta;
}

double formula_derivative(const SupportFunction& k, const SupportFunction& l, double q,
                          const MeasureConfig& cfg) {
  const MeasureConfig use = same_body(k, l) ? cfg : canonical_config(cfg);
  const SphericalMeasure mu = pharmonic_measure(k, use);
  return formula_from_measure(k, l, q, mu, use.n, use.annulus.p);
}

VariationReport verify_variation(const SupportFunction& k, const SupportFunction& l, double q,
                                 const MeasureConfig& cfg, const VariationConfig& vcfg,
                                 const std::string& k_id, const std::string& l_id) {
  VariationReport rep;
  rep.k_id = k_id;
  rep.l_id = l_id;
  rep.q = q;
  rep.p = cfg.annulus.p;
  rep.step = vcfg.delta;
  rep.richardson_used = vcfg.richardson;
  rep.formula_value = formula_derivative(k, l, q, cfg);
  rep.fd_value = fd_derivative(k, l, q, cfg, vcfg.delta, vcfg.richardson, &rep.step_warning);
  rep.rel_error =
      std::abs(rep.fd_value - rep.formula_value) / std::max(std::abs(rep.formula_value), 1e-8);
  rep.pass = rep.rel_error <= vcfg.tol_var;
  return rep;
}

}  // namespace pharm
