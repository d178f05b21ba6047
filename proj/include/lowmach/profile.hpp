/// @file profile.hpp
/// @brief Long-range potential and the hydrostatic density profile it supports.
#pragma once

#include <iosfwd>

#include "lowmach/field.hpp"
#include "lowmach/params.hpp"

namespace lowmach {

/// F(x) = amplitude / sqrt(core^2 + |x|^2): smooth, positive, ~ 1/|x| at infinity.
struct PotentialSpec {
  double amplitude = 1.0;
  double core = 1.0;

  double value(double r) const;
  double d1(double r) const;  ///< dF/dr
  double d2(double r) const;  ///< d^2F/dr^2
};

/// Static state rho0 solving grad rho0^gamma = rho0 grad F with rho0 -> rho_bar.
struct StaticProfile {
  Grid grid;
  PotentialSpec potential;
  double gamma;
  double rho_bar;
  ScalarField rho0;
  ScalarField potential_field;  ///< F at cell centres
  ScalarField p_prime;          ///< p'(rho0)
  VectorField grad_rho0;        ///< analytic, cell-centred
  VectorField grad_potential;   ///< analytic, cell-centred

  /// rho0 / p'(rho0), the weight of the acoustic inner product.
  ScalarField acoustic_weight() const;
  /// p'(rho0) / rho0, the coefficient in front of the acoustic operator.
  ScalarField sound_coefficient() const;
};

/// Q(r) = gamma r^(gamma-1) / (gamma-1) and its inverse.
double enthalpy_q(double rho, double gamma);
double enthalpy_q_inverse(double y, double gamma);

/// rho0(r) = Q^{-1}(F(r) + Q(rho_bar)) and its first two radial derivatives.
struct ProfilePoint {
  double rho, drho, d2rho;
};
ProfilePoint profile_at(const PotentialSpec& spec, double r, double gamma, double rho_bar);

/// Closed-form profile; throws DomainError for gamma <= 1 or rho_bar <= 0.
StaticProfile build_profile(const PotentialSpec& spec, const ScalingParams& params, const Grid& g);

/// Max-norm of the centred-difference residual grad(rho0^gamma) - rho0 grad F (radial).
double static_residual(const StaticProfile& prof, const Grid& g);

struct FlatnessReport {
  double potential_gradient;  ///< max |x|^2 |grad F|
  double potential_hessian;   ///< max |x|^3 |grad^2 F|
  double coefficient_first;   ///< max |x|^2 (|grad A| + |B|)
  double coefficient_second;  ///< max |x|^3 (|grad^2 A| + |grad B|)
};

/// A = p'(rho0), B = rho0 Q''(rho0) grad rho0; derivatives evaluated analytically
/// at the cell centres.
FlatnessReport flatness_report(const PotentialSpec& spec, const ScalingParams& params,
                               const Grid& g);

/// CSV columns r, F, rho0, p_prime (radial grids only).
void write_profile_csv(std::ostream& os, const StaticProfile& prof);
void write_flatness(std::ostream& os, const FlatnessReport& rep);

}  // namespace lowmach
