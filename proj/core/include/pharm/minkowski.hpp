#pragma once

#include <vector>

#include "pharm/measure.hpp"

namespace pharm {

/// Target of the L_q Minkowski problem.
struct TargetMeasure {
  SphericalMeasure measure;
  double spread_margin = 0.0;  // min one-sided first moment over probe directions
};

struct SolverConfig {
  double tol_solve = 0.05;    // stationarity residual
  double tol_center = 1e-8;   // gradient tolerance of the inner maximizer, times total mass
  double tol_norm = 0.01;     // allowed Gamma drift before a corrective rescale
  int max_outer = 100;
  int max_center_iters = 200;
  double step_floor = 1e-8;
};

struct IterRecord {
  int iter = 0;
  double objective = 0.0;
  double residual = 0.0;
  double gamma = 0.0;
};

struct MinkowskiSolution {
  SupportFunction omega;
  double c = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  bool rescaled_to_unit = false;
  std::vector<IterRecord> trace;
};

/// Smallest one-sided first moment over a fine sweep of probe directions;
/// positive iff the measure is not concentrated on any closed hemisphere.
double check_spread(const SphericalMeasure& mu);

/// Wrap a density as a solver target (computes the spread margin).
TargetMeasure make_target(SphericalMeasure mu);

/// Phi_Q(zeta) = integral (h_Q - <zeta, xi>)^q dmu.
double phi(const SupportFunction& q_body, Vec2 zeta, const SphericalMeasure& mu, double q);

/// Unique maximizer of Phi_Q over the interior of Q (damped Newton ascent
/// with fraction-to-boundary backtracking).
Vec2 optimal_center(const SupportFunction& q_body, const SphericalMeasure& mu, double q,
                    const SolverConfig& cfg = {});

/// Scale Q so Gamma(Q) matches Gamma of the unit ball under the same
/// configuration; one corrective rescale absorbs the discrete drift.
SupportFunction normalize_gamma(const SupportFunction& q_body, const MeasureConfig& cfg);

/// sup over zeta of Phi (no PDE solve involved).
double objective(const SupportFunction& q_body, const SphericalMeasure& mu, double q,
                 const SolverConfig& cfg = {});

/// Relative sup-norm of mu - c * h_Omega^{1-q} dmu_Omega over grid cells,
/// after a 3-cell box filter on both densities.
double stationarity_residual(const SupportFunction& omega, double c, const SphericalMeasure& mu,
                             double q, const MeasureConfig& cfg);

/// Scale omega so the constant becomes 1; requires p != n+1-q.
SupportFunction rescale_to_unit_constant(const SupportFunction& omega, double c, double p,
                                         double q, int n);

/// L_q measure of a known body, normalized to unit mass, as a round-trip target.
TargetMeasure synth_target(const SupportFunction& omega_star, double q, const MeasureConfig& cfg);

/// Projected descent on support values under the Gamma constraint.
MinkowskiSolution solve_minkowski(const TargetMeasure& target, double p, double q,
                                  const MeasureConfig& cfg, const SolverConfig& scfg = {});

}  // namespace pharm
