/// @file params.hpp
/// @brief Scaling parameters of the primitive system and the pressure law.
#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace lowmach {

/// eps scales Mach and Froude numbers as eps^2 and the Reynolds number as eps^-alpha.
struct ScalingParams {
  double eps = 0.2;
  double alpha = 1.0;
  double gamma = 5.0 / 3.0;
  double lambda = 0.0;  ///< bulk viscosity
  double rho_bar = 1.0;
  double horizon = 1.0;

  /// Checks gamma > 3/2 and 0 < alpha < 4/3 plus positivity of eps, rho_bar and
  /// horizon.  Strict mode throws DomainError; warn-only mode returns the violated
  /// hypotheses instead (positivity violations always throw).
  std::vector<std::string> validate(bool warn_only = false) const;
};

/// p(Z) = Z^gamma
inline double pressure(double z, double gamma) { return std::pow(z, gamma); }
inline double pressure_prime(double z, double gamma) { return gamma * std::pow(z, gamma - 1.0); }

/// H(Z) = Z^gamma / (gamma - 1)
inline double pressure_potential(double z, double gamma) { return std::pow(z, gamma) / (gamma - 1.0); }
inline double pressure_potential_d1(double z, double gamma) {
  return gamma / (gamma - 1.0) * std::pow(z, gamma - 1.0);
}
inline double pressure_potential_d2(double z, double gamma) { return gamma * std::pow(z, gamma - 2.0); }

/// H(z) - H'(r)(z - r) - H(r) >= 0, the convex remainder used by both energies.
inline double pressure_potential_bracket(double z, double r, double gamma) {
  return pressure_potential(z, gamma) - pressure_potential_d1(r, gamma) * (z - r) -
         pressure_potential(r, gamma);
}

}  // namespace lowmach
