#pragma once

#include <string>

#include "pharm/measure.hpp"

namespace pharm {

struct VariationConfig {
  double delta = 1e-3;
  double tol_var = 0.02;
  bool richardson = true;
};

/// One finite-difference vs closed-form derivative comparison.
struct VariationReport {
  std::string k_id;
  std::string l_id;
  double q = 0.0;
  double p = 0.0;
  double fd_value = 0.0;
  double formula_value = 0.0;
  double rel_error = 0.0;
  double step = 0.0;
  bool richardson_used = false;
  bool step_warning = false;  // the two central differences disagree by > 20%
  bool pass = false;
};

/// Gamma along the q-sum path t -> K^t. For L = K the configuration scales
/// with the body; otherwise the obstacle stays frozen at the base body's
/// placement while the boundary moves.
double gamma_on_path(const SupportFunction& k, const SupportFunction& l, double q, double t,
                     const MeasureConfig& cfg);

/// Central difference of Gamma(K^t) at t = 0 from steps +-delta (and
/// +-delta/2 when Richardson extrapolation is enabled); the four solves run
/// concurrently.
double fd_derivative(const SupportFunction& k, const SupportFunction& l, double q,
                     const MeasureConfig& cfg, double delta, bool richardson = true,
                     bool* step_warning = nullptr);

/// Closed form: (n-p+1)/q * integral of h_L^q h_K^{1-q} dmu_K.
double formula_derivative(const SupportFunction& k, const SupportFunction& l, double q,
                          const MeasureConfig& cfg);
double formula_from_measure(const SupportFunction& k, const SupportFunction& l, double q,
                            const SphericalMeasure& mu_k, int n, double p);

VariationReport verify_variation(const SupportFunction& k, const SupportFunction& l, double q,
                                 const MeasureConfig& cfg, const VariationConfig& vcfg,
                                 const std::string& k_id = "K", const std::string& l_id = "L");

}  // namespace pharm
