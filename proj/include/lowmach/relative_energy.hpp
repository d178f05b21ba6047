/// @file relative_energy.hpp
/// @brief Relative energy, the uniform-bound measurements, the local residual
/// pressure integral and a term-by-term audit of the relative energy inequality.
#pragma once

#include <string>
#include <vector>

#include "lowmach/acoustic.hpp"
#include "lowmach/cutoff.hpp"
#include "lowmach/primitive.hpp"

namespace lowmach {

/// int [rho |u - U|^2 / 2 + (H(rho Theta) - H'(r)(rho Theta - r) - H(r)) / eps^2].
/// U is cell-centred; throws DomainError if r <= 0 somewhere.
double rel_energy(const PrimitiveState& s, const ScalarField& r, const VectorField& U,
                  const ScalingParams& params, const Grid& g);

/// One measured bound: the left-hand side and the constant implied after
/// dividing by the stated power of eps.
struct BoundMeasure {
  std::string name;
  double value = 0.0;
  double constant = 0.0;
};

struct UniformBounds {
  BoundMeasure kinetic;        ///< sup ||sqrt(rho) u||_2
  BoundMeasure shear;          ///< eps^{alpha/2} ||grad u + grad^t u - 2/3 div u I||_{L2 L2}
  BoundMeasure bulk;           ///< eps^{alpha/2} sqrt(lambda) ||div u||_{L2 L2}
  BoundMeasure temperature;    ///< sup ||(Theta-1)/eps^2||_1 + ||.||_inf
  BoundMeasure essential;      ///< sup ||[(rho-rho0)/eps]_ess||_2 + ||[(q-rho0)/eps]_ess||_2
  BoundMeasure residual;       ///< sup int [1]_res + |[rho]_res|^gamma + |[q]_res|^gamma, / eps^2
  BoundMeasure velocity_h1;    ///< eps^{alpha/2} ||u||_{L2 W12}
  double residual_measure = 0; ///< sup int [1]_res, reported separately
  double residual_powers = 0;  ///< sup of the two gamma-power terms

  std::vector<BoundMeasure> all() const;
};

/// States must include t = 0 and be in time order; time integrals use the trapezoid rule.
UniformBounds uniform_bounds_report(const std::vector<PrimitiveState>& trajectory,
                                    const StaticProfile& prof, const ScalingParams& params,
                                    const Grid& g);

/// int_0^T int_{|x|<radius} ([q]_res)^{gamma + beta}; requires 0 < beta < gamma/3.
double residual_pressure_integral(const std::vector<PrimitiveState>& trajectory,
                                  const StaticProfile& prof, double gamma, double radius,
                                  double beta, const Grid& g);

/// Least-squares slope of log(value) against log(eps).  Returns +inf when the
/// values vanish at the small-eps end only, NaN when nothing is positive.
double fit_log_slope(const std::vector<double>& eps, const std::vector<double>& values);

/// Relative energy inequality audit for the ansatz r = rho0 + eps s, U = V + grad Phi.
struct ReiSample {
  double t;
  double rel_energy;
  double dissipation;  ///< eps^alpha int_0^t int S(grad(u-U)) : grad(u-U)
  double lhs;          ///< rel_energy(t) - rel_energy(0) + dissipation
  double momentum;     ///< int_0^t of the rho (U_t + u . grad U).(U - u) + viscous group
  double pressure;     ///< int_0^t of the (r - q) H'(r)_t + grad H'(r) . (rU - qu) group / eps^2
  double buoyancy;     ///< int_0^t of -(div U (q^gamma - r^gamma) + rho grad F . (U - u)) / eps^2
  double rhs;
  double defect;       ///< lhs - rhs
};

struct ReiReport {
  std::vector<ReiSample> samples;
  double tolerance = 0.0;  ///< 1e-2 max(E_rel(0), energy dissipated by the primitive run)
  double max_defect = 0.0;
  bool holds = false;
};

/// `velocity_scale` multiplies U (1 gives the ansatz).  V is the anelastic
/// velocity on faces at each sample (zero in radial geometry); pass an empty vector
/// to use V = 0.  Sample times of the three trajectories must agree to 1e-12.
ReiReport rei_audit(const std::vector<PrimitiveState>& primitive,
                    const std::vector<AcousticState>& acoustic,
                    const std::vector<VectorField>& anelastic_velocity,
                    const AcousticOperator& A, const StaticProfile& prof,
                    const ScalingParams& params, const Grid& g, double energy_dissipated,
                    double velocity_scale = 1.0);

}  // namespace lowmach
