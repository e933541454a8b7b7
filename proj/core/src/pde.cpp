#include "pharm/pde.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pharm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Element {
  int g[3];
  double gradx[3];
  double grady[3];
  double area;
};

// P1 triangles on the structured quad grid, two per cell.
std::vector<Element> build_elements(const AnnulusMesh& mesh) {
  std::vector<Element> elements;
  elements.reserve(2 * mesh.ns * mesh.ntheta);
  auto add = [&](int a, int b, int c) {
    const Vec2& pa = mesh.nodes[a];
    const Vec2& pb = mesh.nodes[b];
    const Vec2& pc = mesh.nodes[c];
    const double area2 = cross(pb - pa, pc - pa);
    if (!(area2 > 0.0)) {
      throw Error(ErrorCode::mesh_degenerate, "nonpositive triangle area");
    }
    Element e;
    e.g[0] = a;
    e.g[1] = b;
    e.g[2] = c;
    e.area = 0.5 * area2;
    const Vec2 p[3] = {pa, pb, pc};
    for (int v = 0; v < 3; ++v) {
      const Vec2& pj = p[(v + 1) % 3];
      const Vec2& pk = p[(v + 2) % 3];
      e.gradx[v] = (pj.y - pk.y) / area2;
      e.grady[v] = (pk.x - pj.x) / area2;
    }
    elements.push_back(e);
  };
  for (int i = 0; i < mesh.ns; ++i) {
    for (int j = 0; j < mesh.ntheta; ++j) {
      const int n00 = mesh.node_id(i, j);
      const int n10 = mesh.node_id(i + 1, j);
      const int n11 = mesh.node_id(i + 1, j + 1);
      const int n01 = mesh.node_id(i, j + 1);
      add(n00, n10, n11);
      add(n00, n11, n01);
    }
  }
  return elements;
}

// Periodic 4-point Lagrange resampling of the support values onto n angles.
// Exact when the angles coincide; avoids the vertex/facet aliasing that a
// direct radial evaluation of the M-facet polytope shows at finer meshes.
std::vector<double> resample_support(const SupportFunction& k, int n) {
  const int m = k.grid.m;
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) {
    const double x = static_cast<double>(j) * m / n;
    const int j1 = static_cast<int>(std::floor(x));
    const double t = x - j1;
    if (t < 1e-14) {
      out[j] = k.value(j1);
      continue;
    }
    const double p0 = k.value(j1 - 1);
    const double p1 = k.value(j1);
    const double p2 = k.value(j1 + 1);
    const double p3 = k.value(j1 + 2);
    const double l0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    const double l1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    const double l2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
    const double l3 = (t + 1.0) * t * (t - 1.0) / 6.0;
    out[j] = l0 * p0 + l1 * p1 + l2 * p2 + l3 * p3;
  }
  return out;
}

}  // namespace

double AnnulusMesh::annulus_thickness() const {
  double t = outer_radius[0] - rho;
  for (double r : outer_radius) t = std::min(t, r - rho);
  return t;
}

Obstacle resolve_obstacle(const SupportFunction& k, const AnnulusConfig& cfg) {
  if (cfg.obstacle) return *cfg.obstacle;
  // The placement must respond smoothly to support perturbations: a max-min
  // inscribed-disk rule has one-sided kinks wherever contacts tie (already at
  // the ball), which leak into Gamma at first order and stall any descent
  // through the normalization. Steiner point plus a power-mean slack radius
  // is smooth and exactly equivariant under translation and scaling.
  const Vec2 c = steiner_point(k);
  return {c, cfg.rho_factor * smooth_boundary_distance(k, c)};
}

AnnulusMesh build_mesh(const SupportFunction& k, const AnnulusConfig& cfg) {
  const Obstacle obs = resolve_obstacle(k, cfg);
  if (!(obs.rho > 0.0)) {
    throw Error(ErrorCode::obstacle_clearance, "obstacle radius must be positive");
  }
  // Distance from the obstacle center to the boundary, as a support polytope.
  double dist = std::numeric_limits<double>::infinity();
  for (int j = 0; j < k.grid.m; ++j) dist = std::min(dist, k.h[j] - dot(obs.center, k.grid.dirs[j]));
  const double clearance = cfg.clearance_factor * inradius(k);
  if (dist - obs.rho < clearance) {
    throw Error(ErrorCode::obstacle_clearance,
                "obstacle leaves clearance " + std::to_string(dist - obs.rho) +
                    " below required " + std::to_string(clearance));
  }

  AnnulusMesh mesh;
  mesh.center = obs.center;
  mesh.rho = obs.rho;
  mesh.ns = cfg.ns;
  mesh.ntheta = cfg.ntheta;
  mesh.dtheta = kTwoPi / cfg.ntheta;
  mesh.outer_radius.resize(cfg.ntheta);
  const SupportFunction centered = translate(k, -obs.center);
  // Constraints much finer than the mesh keep the circumscription error of
  // the ring polytope well below the radial spacing; the ring then sits on
  // the body boundary to higher order than the gradient extraction needs.
  const int fine = std::max({1024, 4 * cfg.ntheta, 4 * k.grid.m});
  const std::vector<double> support = resample_support(centered, fine);
  const double dphi = kTwoPi / fine;
  std::vector<Vec2> dirs(fine);
  for (int j = 0; j < fine; ++j) dirs[j] = {std::cos(dphi * j), std::sin(dphi * j)};
  for (int j = 0; j < cfg.ntheta; ++j) {
    const Vec2 ray{std::cos(mesh.dtheta * j), std::sin(mesh.dtheta * j)};
    double r = std::numeric_limits<double>::infinity();
    for (int kk = 0; kk < fine; ++kk) {
      const double denom = dot(dirs[kk], ray);
      if (denom > 1e-12) r = std::min(r, support[kk] / denom);
    }
    if (!(r > obs.rho) || !std::isfinite(r)) {
      throw Error(ErrorCode::mesh_degenerate, "outer ring collapses onto the obstacle");
    }
    mesh.outer_radius[j] = r;
  }
  mesh.nodes.resize(mesh.node_count());
  for (int i = 0; i <= cfg.ns; ++i) {
    const double s = static_cast<double>(i) / cfg.ns;
    for (int j = 0; j < cfg.ntheta; ++j) {
      const double r = (1.0 - s) * obs.rho + s * mesh.outer_radius[j];
      const double t = mesh.dtheta * j;
      mesh.nodes[mesh.node_id(i, j)] = obs.center + Vec2{r * std::cos(t), r * std::sin(t)};
    }
  }
  return mesh;
}

PHarmonicSolution solve_plaplace(const AnnulusMesh& mesh, const AnnulusConfig& cfg,
                                 const std::vector<double>* warm_start,
                                 const std::vector<double>* inner_data) {
  if (!(cfg.p > 1.0)) {
    throw Error(ErrorCode::parameter_domain, "p must exceed 1");
  }
  const int ns = mesh.ns;
  const int ntheta = mesh.ntheta;
  const int n_nodes = mesh.node_count();
  const int n_int = (ns - 1) * ntheta;
  const std::vector<Element> elements = build_elements(mesh);
  if (inner_data && static_cast<int>(inner_data->size()) != ntheta) {
    throw Error(ErrorCode::grid_mismatch, "inner data does not match the angular mesh");
  }

  // Regularization floor relative to the capacitary gradient scale.
  const double grad_scale = 1.0 / mesh.annulus_thickness();
  const double eps2 = std::pow(cfg.epsilon_reg * grad_scale, 2);
  const double coeff_exp = 0.5 * (cfg.p - 2.0);

  auto interior_index = [&](int node) -> int {
    const int i = node / ntheta;
    if (i == 0 || i == ns) return -1;
    return (i - 1) * ntheta + node % ntheta;
  };
  auto dirichlet_value = [&](int node) -> double {
    if (node / ntheta != 0) return 0.0;
    return inner_data ? (*inner_data)[node % ntheta] : 1.0;
  };

  std::vector<double> u(n_nodes);
  if (warm_start && static_cast<int>(warm_start->size()) == n_nodes) {
    u = *warm_start;
  } else {
    for (int i = 0; i <= ns; ++i) {
      for (int j = 0; j < ntheta; ++j) {
        u[mesh.node_id(i, j)] = dirichlet_value(mesh.node_id(0, j)) * (1.0 - static_cast<double>(i) / ns);
      }
    }
  }
  // Boundary rows are prescribed regardless of the start.
  for (int j = 0; j < ntheta; ++j) {
    u[mesh.node_id(0, j)] = dirichlet_value(mesh.node_id(0, j));
    u[mesh.node_id(ns, j)] = 0.0;
  }

  std::vector<double> weights(elements.size());
  auto compute_weights = [&]() {
    for (size_t t = 0; t < elements.size(); ++t) {
      const Element& e = elements[t];
      double gx = 0.0, gy = 0.0;
      for (int v = 0; v < 3; ++v) {
        gx += u[e.g[v]] * e.gradx[v];
        gy += u[e.g[v]] * e.grady[v];
      }
      weights[t] = std::pow(gx * gx + gy * gy + eps2, coeff_exp);
    }
  };

  using Sparse = Eigen::SparseMatrix<double>;
  Sparse A(n_int, n_int);
  Eigen::VectorXd rhs(n_int);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(elements.size() * 9);

  auto assemble = [&]() {
    triplets.clear();
    rhs.setZero();
    for (size_t t = 0; t < elements.size(); ++t) {
      const Element& e = elements[t];
      const double w = weights[t] * e.area;
      for (int a = 0; a < 3; ++a) {
        const int ia = interior_index(e.g[a]);
        if (ia < 0) continue;
        for (int b = 0; b < 3; ++b) {
          const double kab = w * (e.gradx[a] * e.gradx[b] + e.grady[a] * e.grady[b]);
          const int ib = interior_index(e.g[b]);
          if (ib >= 0) {
            triplets.emplace_back(ia, ib, kab);
          } else {
            rhs[ia] -= kab * dirichlet_value(e.g[b]);
          }
        }
      }
    }
    A.setFromTriplets(triplets.begin(), triplets.end());
  };

  Eigen::SimplicialLDLT<Sparse> solver;
  bool analyzed = false;

  PHarmonicSolution sol;
  std::vector<double> prev_update;
  double prev_norm = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    compute_weights();
    assemble();
    if (!analyzed) {
      solver.analyzePattern(A);
      analyzed = true;
    }
    solver.factorize(A);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::mesh_degenerate, "linear solve failed to factorize");
    }
    const Eigen::VectorXd x = solver.solve(rhs);

    std::vector<double> update(n_int);
    double dotprev = 0.0;
    double norm = 0.0;
    for (int idx = 0; idx < n_int; ++idx) {
      const int node = ntheta + idx;
      update[idx] = x[idx] - u[node];
      if (!prev_update.empty()) dotprev += update[idx] * prev_update[idx];
      norm = std::max(norm, std::abs(update[idx]));
    }
    // Damp when the update direction oscillates or grows.
    const double relax = (!prev_update.empty() && (dotprev < 0.0 || norm > prev_norm)) ? 0.5 : 1.0;
    for (int idx = 0; idx < n_int; ++idx) u[ntheta + idx] += relax * update[idx];
    prev_update = std::move(update);
    prev_norm = norm;
    if (relax * norm <= cfg.picard_tol) {
      ++iter;
      break;
    }
  }

  // Nonlinear residual at the returned iterate.
  compute_weights();
  assemble();
  Eigen::VectorXd ui(n_int);
  for (int idx = 0; idx < n_int; ++idx) ui[idx] = u[ntheta + idx];
  const double denom = std::max(rhs.norm(), 1e-300);
  sol.residual = (A * ui - rhs).norm() / denom;

  if (iter >= cfg.max_iters && prev_norm > cfg.picard_tol) {
    throw Error(ErrorCode::no_convergence,
                "picard stalled after " + std::to_string(iter) + " iterations, residual " +
                    std::to_string(sol.residual));
  }

  sol.u = std::move(u);
  sol.iterations = iter;
  return sol;
}

double interpolate(const AnnulusMesh& mesh, const std::vector<double>& u, Vec2 point) {
  const Vec2 d = point - mesh.center;
  double theta = std::atan2(d.y, d.x);
  if (theta < 0.0) theta += kTwoPi;
  double jf = theta / mesh.dtheta;
  if (jf >= mesh.ntheta) jf -= mesh.ntheta;
  // Quadratic interpolation of the outer radius keeps the s-coordinate
  // consistent with the accuracy of the field interpolation below.
  const int jr = static_cast<int>(std::floor(jf));
  auto ring = [&](int j) { return mesh.outer_radius[((j % mesh.ntheta) + mesh.ntheta) % mesh.ntheta]; };
  const double tr = jf - jr;
  double wr[3] = {0.5 * (tr - 1.0) * (tr - 2.0), -tr * (tr - 2.0), 0.5 * tr * (tr - 1.0)};
  const double outer = wr[0] * ring(jr) + wr[1] * ring(jr + 1) + wr[2] * ring(jr + 2);
  const double r = d.norm();
  double s = (r - mesh.rho) / (outer - mesh.rho);
  if (s < -0.05 || s > 1.05) {
    throw Error(ErrorCode::geometry_inconsistent, "interpolation point outside the annulus");
  }
  s = std::clamp(s, 0.0, 1.0);

  // Biquadratic Lagrange stencil in logical (s, theta) coordinates; one-sided
  // differencing of the interpolant stays second order for the gradient.
  const double si = s * mesh.ns;
  int i0 = static_cast<int>(std::floor(si + 0.5)) - 1;
  i0 = std::clamp(i0, 0, mesh.ns - 2);
  const double x = si - i0;
  const double wi[3] = {0.5 * (x - 1.0) * (x - 2.0), -x * (x - 2.0), 0.5 * x * (x - 1.0)};

  int j0 = static_cast<int>(std::floor(jf + 0.5)) - 1;
  const double y = jf - j0;
  const double wj[3] = {0.5 * (y - 1.0) * (y - 2.0), -y * (y - 2.0), 0.5 * y * (y - 1.0)};

  double acc = 0.0;
  for (int a = 0; a < 3; ++a) {
    double row = 0.0;
    for (int b = 0; b < 3; ++b) row += wj[b] * u[mesh.node_id(i0 + a, j0 + b)];
    acc += wi[a] * row;
  }
  return acc;
}

std::vector<double> boundary_gradient(const PHarmonicSolution& sol, const AnnulusMesh& mesh,
                                      const SupportFunction& k) {
  const DirectionGrid& g = k.grid;
  // At corner fans of polygonal bodies the potential degenerates (u ~ dist^2
  // toward the corner) and the curvature density vanishes there; the
  // extraction floors the gradient instead of failing on such directions.
  const double floor_grad = 1e-10 / mesh.annulus_thickness();
  std::vector<double> out(g.m);
  for (int j = 0; j < g.m; ++j) {
    Vec2 bp = boundary_point(k, j);
    const Vec2 nu = g.dirs[j];
    const Vec2 d = bp - mesh.center;
    double theta = std::atan2(d.y, d.x);
    if (theta < 0.0) theta += kTwoPi;
    double jf = theta / mesh.dtheta;
    int j0 = static_cast<int>(std::floor(jf));
    double tau = jf - j0;
    if (j0 >= mesh.ntheta) {
      j0 = 0;
      tau = 0.0;
    }
    const double outer =
        (1.0 - tau) * mesh.outer_radius[j0] + tau * mesh.outer_radius[(j0 + 1) % mesh.ntheta];
    // Anchor points that overshoot the ring (kinked support derivative near
    // corners) are pulled back onto it along the ray.
    const double r = d.norm();
    if (r > outer) bp = mesh.center + d * (outer / r);
    const double delta = (outer - mesh.rho) / mesh.ns;
    // u vanishes on the outer ring, so one-sided differencing along the
    // inward normal is second order: |grad u| = (4 u1 - u2) / (2 delta).
    const double u1 = interpolate(mesh, sol.u, bp - nu * delta);
    const double u2 = interpolate(mesh, sol.u, bp - nu * (2.0 * delta));
    const double grad = (4.0 * u1 - u2) / (2.0 * delta);
    out[j] = std::max(grad, floor_grad);
  }
  return out;
}

PHarmonicSolution solve_annulus(const SupportFunction& k, const AnnulusConfig& cfg,
                                const std::vector<double>* warm_start) {
  const AnnulusMesh mesh = build_mesh(k, cfg);
  PHarmonicSolution sol = solve_plaplace(mesh, cfg, warm_start);
  sol.boundary_gradient = boundary_gradient(sol, mesh, k);
  return sol;
}

double RadialOracle::u(double r) const {
  if (p == 2.0) return std::log(outer_radius / r) / std::log(outer_radius / rho);
  const double ra = std::pow(r, alpha);
  return (ra - std::pow(outer_radius, alpha)) / (std::pow(rho, alpha) - std::pow(outer_radius, alpha));
}

double RadialOracle::du(double r) const {
  if (p == 2.0) return -1.0 / (r * std::log(outer_radius / rho));
  return alpha * std::pow(r, alpha - 1.0) /
         (std::pow(rho, alpha) - std::pow(outer_radius, alpha));
}

RadialOracle radial_oracle(double outer_radius, double rho, double p) {
  if (!(rho > 0.0) || !(rho < outer_radius) || !(p > 1.0)) {
    throw Error(ErrorCode::parameter_domain, "radial oracle needs 0 < rho < R and p > 1");
  }
  return {outer_radius, rho, p, (p - 2.0) / (p - 1.0)};
}

}  // namespace pharm
