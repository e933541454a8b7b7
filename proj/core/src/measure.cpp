#include "pharm/measure.hpp"

#include <cmath>

namespace pharm {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::pharmonic: return "pharmonic";
    case Provenance::lq: return "lq";
    case Provenance::target: return "target";
    case Provenance::synthetic: return "synthetic";
  }
  return "synthetic";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "pharmonic") return Provenance::pharmonic;
  if (s == "lq") return Provenance::lq;
  if (s == "target") return Provenance::target;
  if (s == "synthetic") return Provenance::synthetic;
  throw Error(ErrorCode::parse_error, "unknown provenance '" + s + "'");
}

SphericalMeasure pharmonic_measure(const SupportFunction& k, const MeasureConfig& cfg,
                                   const std::vector<double>* warm_start,
                                   std::vector<double>* field_out) {
  if (cfg.n != 2) {
    throw Error(ErrorCode::parameter_domain, "the solver is implemented for dimension 2");
  }
  PHarmonicSolution sol = solve_annulus(k, cfg.annulus, warm_start);
  const std::vector<double> curv = curvature_density(k);
  SphericalMeasure m{k.grid, std::vector<double>(k.grid.m),
                     {Provenance::pharmonic, cfg.annulus.p, 1.0, body_hash(k)}};
  for (int j = 0; j < k.grid.m; ++j) {
    m.density[j] = std::pow(sol.boundary_gradient[j], cfg.annulus.p - 1.0) * curv[j];
  }
  if (field_out) *field_out = std::move(sol.u);
  return m;
}

SphericalMeasure lq_from_pharmonic(const SupportFunction& k, const SphericalMeasure& mu_k,
                                   double q) {
  if (!same_grid(k.grid, mu_k.grid)) {
    throw Error(ErrorCode::grid_mismatch, "body and measure on different grids");
  }
  SphericalMeasure m = mu_k;
  m.meta.provenance = Provenance::lq;
  m.meta.q = q;
  for (int j = 0; j < k.grid.m; ++j) m.density[j] *= std::pow(k.h[j], 1.0 - q);
  return m;
}

SphericalMeasure lq_measure(const SupportFunction& k, double q, const MeasureConfig& cfg,
                            const std::vector<double>* warm_start) {
  return lq_from_pharmonic(k, pharmonic_measure(k, cfg, warm_start), q);
}

double gamma_from_measure(const SupportFunction& k, const SphericalMeasure& mu_k) {
  if (!same_grid(k.grid, mu_k.grid)) {
    throw Error(ErrorCode::grid_mismatch, "body and measure on different grids");
  }
  double acc = 0.0;
  for (int j = 0; j < k.grid.m; ++j) acc += k.h[j] * mu_k.density[j];
  return acc * k.grid.dtheta;
}

double gamma_functional(const SupportFunction& k, const MeasureConfig& cfg) {
  return gamma_from_measure(k, pharmonic_measure(k, cfg));
}

double total_mass(const SphericalMeasure& m) {
  double acc = 0.0;
  for (double v : m.density) acc += v;
  return acc * m.grid.dtheta;
}

Vec2 measure_centroid(const SphericalMeasure& m) {
  Vec2 c{0.0, 0.0};
  for (int j = 0; j < m.grid.m; ++j) c = c + m.grid.dirs[j] * m.density[j];
  return c * m.grid.dtheta;
}

double integrate(const SphericalMeasure& m, std::span<const double> f) {
  if (static_cast<int>(f.size()) != m.grid.m) {
    throw Error(ErrorCode::grid_mismatch, "integrand does not match the measure grid");
  }
  double acc = 0.0;
  for (int j = 0; j < m.grid.m; ++j) acc += f[j] * m.density[j];
  return acc * m.grid.dtheta;
}

}  // namespace pharm
