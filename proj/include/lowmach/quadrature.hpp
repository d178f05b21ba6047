/// @file quadrature.hpp
/// @brief Integrals, Lebesgue norms and the weighted acoustic inner product.
#pragma once

#include <limits>
#include <optional>

#include "lowmach/field.hpp"

namespace lowmach {

struct StaticProfile;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Sum_i f_i w_i with the grid's geometric weights.
double integrate(const ScalarField& f, const Grid& g);

/// Integral restricted to cells whose centre satisfies |x| < radius.
double integrate_ball(const ScalarField& f, const Grid& g, double radius);

/// (int |f|^p)^{1/p}, or max |f| for p = infinity.  With `ball_radius` set the
/// integral (or max) runs over |x| < ball_radius only.  Throws DomainError for p < 1.
double lp_norm(const ScalarField& f, double p, const Grid& g,
               std::optional<double> ball_radius = std::nullopt);

/// L^2 norm of a vector field (Euclidean norm of components, cell quadrature).
double l2_norm(const VectorField& v, const Grid& g);

/// <u; v> = int u v rho0 / p'(rho0).
double weighted_inner(const ScalarField& u, const ScalarField& v, const StaticProfile& prof);

/// Pointwise u*v*w summed with quadrature weights; shared by the inner products.
double integrate_product(const ScalarField& u, const ScalarField& v, const ScalarField& w);

}  // namespace lowmach
