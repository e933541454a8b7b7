#pragma once

#include <optional>
#include <vector>

#include "pharm/geometry.hpp"

namespace pharm {

/// Inner obstacle disk of the capacitary configuration.
struct Obstacle {
  Vec2 center{0.0, 0.0};
  double rho = 0.0;
};

struct AnnulusConfig {
  double p = 2.0;
  int ns = 64;      // radial cells
  int ntheta = 256; // angular cells
  double epsilon_reg = 1e-6;  // relative gradient regularization
  double picard_tol = 1e-8;   // relative update tolerance
  int max_iters = 200;
  double rho_factor = 0.4;        // obstacle radius as a fraction of the inradius
  double clearance_factor = 0.1;  // required clearance as a fraction of the inradius
  std::optional<Obstacle> obstacle;  // explicit obstacle; otherwise placed automatically
};

/// Structured mesh on the annulus between the obstacle circle and the body
/// boundary; node (i,j) sits at radius (1-s_i) rho + s_i R(theta_j) along the
/// ray of angle theta_j from the obstacle center.
struct AnnulusMesh {
  Vec2 center;
  double rho = 0.0;
  int ns = 0;
  int ntheta = 0;
  double dtheta = 0.0;
  std::vector<double> outer_radius;  // per mesh angle
  std::vector<Vec2> nodes;           // (ns+1) * ntheta

  int node_id(int i, int j) const { return i * ntheta + ((j % ntheta) + ntheta) % ntheta; }
  const Vec2& node(int i, int j) const { return nodes[node_id(i, j)]; }
  int node_count() const { return (ns + 1) * ntheta; }
  double annulus_thickness() const;
};

struct PHarmonicSolution {
  std::vector<double> u;  // nodal values, inner ring u=1, outer ring u=0
  double residual = 0.0;  // final nonlinear residual (relative)
  int iterations = 0;
  std::vector<double> boundary_gradient;  // |grad u| per normal direction of the body grid
};

/// Obstacle used for a body: explicit if configured, otherwise a disk of
/// rho_factor times the smooth boundary distance, centered at the Steiner
/// point (a placement that varies smoothly with the support values).
Obstacle resolve_obstacle(const SupportFunction& k, const AnnulusConfig& cfg);

AnnulusMesh build_mesh(const SupportFunction& k, const AnnulusConfig& cfg);

/// Picard iteration on the regularized p-Laplacian with frozen coefficients;
/// optional warm start with a nodal field of matching mesh dimensions.
/// inner_data, when given, prescribes per-angle Dirichlet values on the inner
/// ring instead of the capacitary constant 1.
PHarmonicSolution solve_plaplace(const AnnulusMesh& mesh, const AnnulusConfig& cfg,
                                 const std::vector<double>* warm_start = nullptr,
                                 const std::vector<double>* inner_data = nullptr);

/// |grad u| at the boundary point of each grid normal, one-sided second-order
/// differences along the inward normal.
std::vector<double> boundary_gradient(const PHarmonicSolution& sol, const AnnulusMesh& mesh,
                                      const SupportFunction& k);

/// Convenience: mesh, solve, and extract the boundary gradient.
PHarmonicSolution solve_annulus(const SupportFunction& k, const AnnulusConfig& cfg,
                                const std::vector<double>* warm_start = nullptr);

/// Bilinear interpolation of a nodal field in mesh coordinates.
double interpolate(const AnnulusMesh& mesh, const std::vector<double>& u, Vec2 point);

/// Closed-form capacitary potential of the round annulus rho < r < R in the
/// plane: the test oracle for the solver.
struct RadialOracle {
  double outer_radius;
  double rho;
  double p;
  double alpha;  // (p-2)/(p-1), exponent of the power branch

  double u(double r) const;
  double du(double r) const;
  double boundary_gradient() const { return std::abs(du(outer_radius)); }
  double obstacle_gradient() const { return std::abs(du(rho)); }
};

RadialOracle radial_oracle(double outer_radius, double rho, double p);

}  // namespace pharm
