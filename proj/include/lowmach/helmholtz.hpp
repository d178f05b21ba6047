/// @file helmholtz.hpp
/// @brief Weighted Poisson solver and the rho0-weighted Helmholtz projection.
#pragma once

#include <utility>

#include "lowmach/field.hpp"

namespace lowmach {

struct StaticProfile;

/// div(coefficient grad phi) = rhs.  Radial: phi = 0 at r_max, regular at r = 0.
/// Cartesian box: impermeable walls, solution fixed by zero mean.
struct WeightedPoissonProblem {
  ScalarField coefficient;
  ScalarField rhs;
  double tolerance = 1e-10;
  int max_iterations = 0;  ///< 0 selects 20 * cells + 1000
};

struct PoissonResult {
  ScalarField phi;
  int iterations;
  double residual;  ///< ||L phi - rhs||_2 / ||rhs||_2
};

/// Jacobi-preconditioned conjugate gradients on -vol * L, stopping on the
/// quadrature L2 residual.  Throws SolverError carrying the last relative residual.
PoissonResult solve_weighted_poisson_detailed(const WeightedPoissonProblem& p);
ScalarField solve_weighted_poisson(const WeightedPoissonProblem& p, const Grid& g);

/// v = H[v] + grad Phi with div(rho0 H[v]) = 0, on face-staggered data.
std::pair<VectorField, ScalarField> project(const VectorField& v, const StaticProfile& prof,
                                            const Grid& g, double tolerance = 1e-10);

/// Same with explicit coefficient (reused by the anelastic predictor).
std::pair<VectorField, ScalarField> project_weighted(const VectorField& v, const ScalarField& coef,
                                                     double tolerance = 1e-10);

/// ||div(coef_f v)||_2, the constraint defect of a face field.
double weighted_divergence_norm(const VectorField& v, const ScalarField& coef);

}  // namespace lowmach
