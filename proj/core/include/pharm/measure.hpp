#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pharm/geometry.hpp"
#include "pharm/pde.hpp"

namespace pharm {

enum class Provenance { pharmonic, lq, target, synthetic };

const char* to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct MeasureMeta {
  Provenance provenance = Provenance::synthetic;
  double p = 0.0;
  double q = 1.0;
  std::uint64_t body = 0;
};

/// Nonnegative density per radian on a direction grid.
struct SphericalMeasure {
  DirectionGrid grid;
  std::vector<double> density;
  MeasureMeta meta;
};

struct MeasureConfig {
  AnnulusConfig annulus;
  int n = 2;  // ambient dimension; formulas read it, the solver requires 2
};

/// Boundary gradient to the power p-1 times the curvature density.
/// field_out, when given, receives the nodal potential (usable as a warm
/// start for a nearby body on the same mesh dimensions).
SphericalMeasure pharmonic_measure(const SupportFunction& k, const MeasureConfig& cfg,
                                   const std::vector<double>* warm_start = nullptr,
                                   std::vector<double>* field_out = nullptr);

/// h^{1-q} weighted p-harmonic measure; q may be any real.
SphericalMeasure lq_measure(const SupportFunction& k, double q, const MeasureConfig& cfg,
                            const std::vector<double>* warm_start = nullptr);

SphericalMeasure lq_from_pharmonic(const SupportFunction& k, const SphericalMeasure& mu_k,
                                   double q);

/// Gamma(K) = integral of h dmu_K.
double gamma_functional(const SupportFunction& k, const MeasureConfig& cfg);
double gamma_from_measure(const SupportFunction& k, const SphericalMeasure& mu_k);

double total_mass(const SphericalMeasure& m);
Vec2 measure_centroid(const SphericalMeasure& m);
double integrate(const SphericalMeasure& m, std::span<const double> f);

}  // namespace pharm
