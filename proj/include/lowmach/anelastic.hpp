/// @file anelastic.hpp
/// @brief Predict-project solver for the anelastic system in temperature form:
/// div(rho0 V) = 0, V_t + V . grad V + grad Pi = -T grad F, T_t + V . grad T = 0.
#pragma once

#include <vector>

#include "lowmach/field.hpp"
#include "lowmach/profile.hpp"

namespace lowmach {

struct AnelasticState {
  VectorField V;  ///< face-staggered
  ScalarField Pi;
  ScalarField T;  ///< temperature rho0 / R
  ScalarField R;  ///< density
  double t = 0.0;
};

/// V = H[v0], T = theta2, R = rho0 / theta2.  Throws DataError if theta2 <= 0.
AnelasticState init_anelastic(const VectorField& v0, const ScalarField& theta2,
                              const StaticProfile& prof, const Grid& g, double tolerance = 1e-10);

/// Largest step allowed by the advective limit 0.4 h / |V|, where |V| is the
/// largest per-cell sum of face speeds; infinite when V = 0.
double anelastic_dt_limit(const AnelasticState& s);

/// Upwind advection and buoyancy, weighted projection (Pi = phi / dt), then
/// conservative upwind transport of rho0 T.  Throws CflError past the limit.
AnelasticState step_anelastic(const AnelasticState& s, const StaticProfile& prof, double dt,
                              const Grid& g, double tolerance = 1e-10);

struct AnelasticRun {
  std::vector<AnelasticState> states;
  std::vector<double> divergence_defect;  ///< ||div(rho0 V)|| / ||rho0 V|| after each sample
  long steps = 0;
};

/// Steps with dt = min(0.4 limit, max_dt) up to each sample time.
AnelasticRun run_anelastic(const AnelasticState& init, const StaticProfile& prof, const Grid& g,
                           const std::vector<double>& sample_times, double max_dt,
                           double tolerance = 1e-10);

/// sum vol (f^2 + |D1 f|^2 + |D2 f|^2) with centred differences along each axis.
double sobolev_surrogate(const ScalarField& f);

struct SmoothnessSample {
  double t, velocity, pressure, density;
};
struct SmoothnessReport {
  std::vector<SmoothnessSample> samples;
  bool blowup = false;  ///< some surrogate grew more than 1e3 times its initial value
};
SmoothnessReport smoothness_monitor(const std::vector<AnelasticState>& trajectory);

/// Relative weighted incompressibility defect ||div(rho0_f V)||_2 / ||rho0 V||_2.
double divergence_defect(const AnelasticState& s, const StaticProfile& prof);

}  // namespace lowmach
