#include "lowmach/helmholtz.hpp"

#include <cmath>
#include <vector>

#include "lowmach/error.hpp"
#include "lowmach/operators.hpp"
#include "lowmach/profile.hpp"
#include "lowmach/quadrature.hpp"

namespace lowmach {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Diagonal of -vol * L, assembled by probing the stencil weights directly.
std::vector<double> jacobi_diagonal(const Grid& g, const VectorField& fc) {
  std::vector<double> diag(g.size(), 0.0);
  if (g.is_radial()) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      diag[i] = g.face_area(i) * fc[0][i] / g.face_distance(i);
      if (i > 0) diag[i] += g.face_area(i - 1) * fc[0][i - 1] / g.h();
    }
    return diag;
  }
  const int n = g.n();
  const double h = g.h();
  const auto nn = static_cast<std::size_t>(n);
  const std::size_t strides[3] = {nn * nn, nn, 1};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const std::size_t c = g.index(i, j, k);
        const int idx[3] = {i, j, k};
        double s = 0.0;
        for (int d = 0; d < 3; ++d) {
          if (idx[d] + 1 < n) s += fc[d][c];
          if (idx[d] > 0) s += fc[d][c - strides[d]];
        }
        diag[c] = s * h;  // h^3 / h^2
      }
  return diag;
}

void remove_mean(std::vector<double>& x, const Grid& g) {
  double s = 0.0;
  for (double v : x) s += v;
  s /= static_cast<double>(g.size());
  for (double& v : x) v -= s;
}

}  // namespace

PoissonResult solve_weighted_poisson_detailed(const WeightedPoissonProblem& p) {
  const Grid& g = p.rhs.grid();
  require_aligned(g, p.coefficient.grid(), "solve_weighted_poisson");
  require_finite(p.rhs, "solve_weighted_poisson rhs");
  if (!(p.coefficient.min() > 0.0)) throw DomainError("weighted Poisson coefficient must be positive");

  const bool neumann = !g.is_radial();
  const std::size_t n = g.size();
  const VectorField fc = face_coefficients(p.coefficient);

  ScalarField rhs = p.rhs;
  if (neumann) {
    // compatibility: the discrete divergence of wall-free fluxes has zero mean
    const double mean = integrate(rhs, g) / (g.volume(0) * static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) rhs[i] -= mean;
  }
  const double rhs_norm = lp_norm(rhs, 2.0, g);
  ScalarField phi(g);
  if (rhs_norm == 0.0) return {phi, 0, 0.0};

  // Solve K phi = b with K = -vol * L (SPD), b = -vol * rhs.
  std::vector<double> vol(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    vol[i] = g.volume(i);
    b[i] = -vol[i] * rhs[i];
  }
  const std::vector<double> diag = jacobi_diagonal(g, fc);
  const int cap = p.max_iterations > 0 ? p.max_iterations : static_cast<int>(20 * n + 1000);

  // True residual in the quadrature L2 norm: sum r_i^2 / vol_i.
  auto residual_norm = [&](const std::vector<double>& r) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += r[i] * r[i] / vol[i];
    return std::sqrt(s);
  };

  std::vector<double> r = b, z(n), d(n), kd(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  if (neumann) remove_mean(z, g);
  d = z;
  double rz = dot(r, z);
  double rel = residual_norm(r) / rhs_norm;
  ScalarField dir(g);
  int it = 0;
  for (; it < cap && rel > p.tolerance; ++it) {
    for (std::size_t i = 0; i < n; ++i) dir[i] = d[i];
    const ScalarField ld = weighted_laplacian(dir, fc);
    for (std::size_t i = 0; i < n; ++i) kd[i] = -vol[i] * ld[i];
    const double alpha = rz / dot(d, kd);
    for (std::size_t i = 0; i < n; ++i) {
      phi[i] += alpha * d[i];
      r[i] -= alpha * kd[i];
    }
    rel = residual_norm(r) / rhs_norm;
    // recompute the residual now and then to stop recurrence drift
    if ((it + 1) % 200 == 0 || rel <= p.tolerance) {
      const ScalarField lphi = weighted_laplacian(phi, fc);
      for (std::size_t i = 0; i < n; ++i) r[i] = b[i] + vol[i] * lphi[i];
      rel = residual_norm(r) / rhs_norm;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    if (neumann) remove_mean(z, g);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) d[i] = z[i] + beta * d[i];
  }
  if (neumann) {
    std::vector<double> x(phi.values().begin(), phi.values().end());
    remove_mean(x, g);
    phi = ScalarField(g, std::move(x));
  }
  if (!(rel <= p.tolerance))
    throw SolverError("weighted Poisson solve did not converge in " + std::to_string(it) +
                          " iterations (relative residual " + std::to_string(rel) + ")",
                      rel);
  return {phi, it, rel};
}

ScalarField solve_weighted_poisson(const WeightedPoissonProblem& p, const Grid& g) {
  require_aligned(p.rhs.grid(), g, "solve_weighted_poisson");
  return solve_weighted_poisson_detailed(p).phi;
}

std::pair<VectorField, ScalarField> project_weighted(const VectorField& v, const ScalarField& coef,
                                                     double tolerance) {
  require_aligned(v.grid(), coef.grid(), "project");
  require_finite(v, "project input");
  VectorField vf = v.staggering() == Staggering::face ? v : to_faces(v);
  clear_wall_faces(vf);
  const VectorField fc = face_coefficients(coef);
  VectorField flux = vf;
  for (int d = 0; d < flux.dim(); ++d) flux[d] *= fc[d];
  WeightedPoissonProblem prob{coef, face_divergence(flux), tolerance, 0};
  ScalarField phi = solve_weighted_poisson_detailed(prob).phi;
  VectorField h = vf - face_gradient(phi);
  return {std::move(h), std::move(phi)};
}

std::pair<VectorField, ScalarField> project(const VectorField& v, const StaticProfile& prof,
                                            const Grid& g, double tolerance) {
  require_aligned(v.grid(), g, "project");
  return project_weighted(v, prof.rho0, tolerance);
}

double weighted_divergence_norm(const VectorField& v, const ScalarField& coef) {
  const VectorField fc = face_coefficients(coef);
  VectorField flux = v;
  for (int d = 0; d < flux.dim(); ++d) flux[d] *= fc[d];
  return lp_norm(face_divergence(flux), 2.0, v.grid());
}

}  // namespace lowmach
