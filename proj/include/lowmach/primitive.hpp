/// @file primitive.hpp
/// @brief Radial finite-volume solver for the scaled compressible system in
/// (rho, m = rho u, q = rho Theta), plus its energy and renormalisation audits.
#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lowmach/error.hpp"
#include "lowmach/field.hpp"
#include "lowmach/kernels.hpp"
#include "lowmach/params.hpp"
#include "lowmach/profile.hpp"

namespace lowmach {

struct PrimitiveState {
  ScalarField rho;
  VectorField mom;  ///< cell-centred momentum
  ScalarField q;    ///< rho Theta
  double t = 0.0;

  /// Theta = q / max(rho, 1e-12), set to 1 where rho < 1e-10.
  ScalarField theta() const;
  /// u = m / rho, zero where rho < 1e-10.
  VectorField velocity() const;
};

/// rho(0) = rho0 + eps rho1, u(0) = u0, Theta(0) = 1 + eps^2 theta2.
struct IllPreparedData {
  ScalarField rho1;
  VectorField u0;
  ScalarField theta2;
};

/// Radial bump family used by configs and the sweep.  Shapes: "gaussian"
/// a exp(-(r/w)^2), or "flat_top" a (1 - smoothstep((r - w)/w)).
struct BumpSpec {
  double amplitude = 0.0;
  double width = 1.0;
  std::string shape = "gaussian";
  double operator()(double r) const;
};

struct DataSpec {
  BumpSpec rho1;
  BumpSpec velocity;  ///< radial velocity is r/width times the bump
  BumpSpec theta2;

  IllPreparedData build(const Grid& g) const;
};

/// L1, L2 and L-infinity size of each data component.
struct DataBounds {
  double rho1_l1, rho1_linf, u0_l2, u0_linf, theta2_l1, theta2_linf;
};
DataBounds data_bounds(const IllPreparedData& d, const Grid& g);

/// Throws DataError when rho0 + eps rho1 <= 0 somewhere.
PrimitiveState init_ill_prepared(const IllPreparedData& data, const StaticProfile& prof,
                                 const ScalingParams& params, const Grid& g);

/// Raised when an update produces a negative density; carries the last good state.
class NegativeDensityError : public SolverError {
 public:
  NegativeDensityError(const std::string& what, double min_rho, PrimitiveState last)
      : SolverError(what, min_rho), state_(std::move(last)) {}
  const PrimitiveState& state() const { return state_; }

 private:
  PrimitiveState state_;
};

struct PrimitiveRates {
  ScalarField drho;
  VectorField dmom;
  ScalarField dq;
};

/// Per-step bookkeeping.
struct StepStats {
  double viscous_work = 0.0;  ///< dissipated by viscosity during the step (>= 0)
  double sponge_mass = 0.0;   ///< change of int rho caused by the sponge
  double sponge_q = 0.0;      ///< change of int q caused by the sponge
  double sponge_energy = 0.0; ///< change of the energy caused by the sponge
};

/// Discretisation of the primitive system on one grid and profile.
///
/// Mass, q and momentum use Rusanov fluxes (the density jump in the mass
/// dissipation is taken relative to rho0 so the static state has no numerical
/// flux); pressure enters as a gradient of face averages and gravity as
/// (rho / rho0) times the same discrete gradient of p(rho0), so the static state
/// is an exact discrete equilibrium.  Time stepping: SSP-RK3, then an exact
/// exponential sponge relaxation toward (rho0, 0, rho0).
class PrimitiveSystem {
 public:
  /// `muscl` switches the dissipative terms to limited linear reconstruction.
  PrimitiveSystem(const StaticProfile& prof, const ScalingParams& params, const Grid& g,
                  bool use_omp = true, bool muscl = true);

  const Grid& grid() const { return grid_; }
  const ScalingParams& params() const { return params_; }
  const StaticProfile& profile() const { return prof_; }

  PrimitiveRates rates(const PrimitiveState& s) const;
  /// 0.4 times the acoustic/advective and viscous step limits.
  double stable_dt(const PrimitiveState& s, double cfl = 0.4) const;
  /// One step; throws CflError if dt > stable_dt(s) (relative slack 1e-12).
  PrimitiveState step(const PrimitiveState& s, double dt, StepStats* stats = nullptr) const;

  /// int [m^2/(2 rho) + (H(q) - H'(rho0)(rho - rho0) - H(rho0)) / eps^2].
  double energy(const PrimitiveState& s) const;
  /// Rate of viscous work -int u . visc(u) >= 0.
  double viscous_power(const PrimitiveState& s) const;
  /// Cell divergence of u built from face averages (zero flux at the wall).
  ScalarField velocity_divergence(const PrimitiveState& s) const;
  /// Face divergence of u used by the viscous term (face f at r = f h).
  std::vector<double> face_divergence(const PrimitiveState& s) const;

  const std::vector<double>& sponge_rate() const { return sigma_; }

 private:
  kernels::PrimitiveRhsInput input(const PrimitiveState& s) const;

  StaticProfile prof_;
  ScalingParams params_;
  Grid grid_;
  bool use_omp_;
  bool muscl_;
  double viscosity_;
  std::vector<double> center_, volume_, area_, grad_p0_, sigma_;
};

/// Free-function form of PrimitiveSystem::step.
PrimitiveState step_primitive(const PrimitiveState& s, const StaticProfile& prof,
                              const ScalingParams& params, double dt, const Grid& g);

struct PrimitiveSample {
  double t;
  double energy;
  double dissipation;   ///< accumulated viscous work
  double mass_defect;   ///< int rho(t) - int rho(0) - sponge mass change
  double q_defect;      ///< same for q
  double sponge_budget; ///< accumulated positive energy change caused by the sponge
};

struct PrimitiveRun {
  std::vector<PrimitiveState> states;
  std::vector<PrimitiveSample> samples;
  long steps = 0;
};

struct PrimitiveRunOptions {
  double cfl = 0.4;
  bool use_omp = true;
  bool muscl = true;
};

/// Advances to each sample time (nondecreasing) and records state plus diagnostics;
/// the initial state is not recorded unless 0 is among the sample times.
PrimitiveRun run_primitive(const PrimitiveState& init, const StaticProfile& prof,
                           const ScalingParams& params, const Grid& g,
                           const std::vector<double>& sample_times,
                           const PrimitiveRunOptions& opt = {});

/// Largest violation of E(t2) + D(t2) - D(t1) <= E(t1) + tol over sampled pairs,
/// with tol = 1e-3 E(0) + sponge budget; <= 0 means the inequality holds.
double energy_inequality_violation(const PrimitiveRun& run, double energy0);

/// Renormalising function b with derivative switched off above `cap`.
struct RenormFunction {
  enum class Kind { constant, linear, quadratic } kind = Kind::quadratic;
  double cap = 10.0;
  double constant = 1.0;

  double value(double y) const;
  double derivative(double y) const;
};

/// |sum vol b'(q) q_t + int (b'(q) q - b(q)) div u| / int |b(q)| at each sample,
/// with q_t the instantaneous semi-discrete rate (the sponge is a separate step).
std::vector<double> renorm_check(const PrimitiveSystem& sys, const std::vector<PrimitiveState>& states,
                                 const RenormFunction& b);

/// Checkpoint: text header then raw little-endian doubles (rho, m, q).
void write_checkpoint(std::ostream& os, const PrimitiveState& s, const ScalingParams& params);
struct Checkpoint {
  PrimitiveState state;
  ScalingParams params;
};
Checkpoint read_checkpoint(std::istream& is);

/// CSV columns t, energy, dissipation, mass_defect, q_defect, sponge_budget.
void write_diagnostics_csv(std::ostream& os, const PrimitiveRun& run);

}  // namespace lowmach
