/// @file cutoff.hpp
/// @brief Essential/residual splitting driven by a smooth plateau cutoff.
#pragma once

#include <utility>

#include "lowmach/field.hpp"

namespace lowmach {

struct StaticProfile;

/// Quintic smoothstep clamped to [0, 1]: 0 for x <= 0, 1 for x >= 1, C^2 inside.
double smoothstep(double x);

/// chi = 1 on [lo, hi], 0 outside [lo - width, hi + width], quintic transitions.
struct EssResCutoff {
  double lo;
  double hi;
  double width;

  /// Plateau [min rho0 / 2, 2 max rho0] with width 0.1 * lo.
  static EssResCutoff for_profile(const StaticProfile& prof);

  double chi(double y) const;
};

/// Returns (chi(weight) f, (1 - chi(weight)) f); the second is formed as f - ess so
/// that the pair sums to f exactly.
std::pair<ScalarField, ScalarField> ess_res_split(const ScalarField& f, const ScalarField& weight,
                                                  const EssResCutoff& cut);

}  // namespace lowmach
