/// @file acoustic.hpp
/// @brief Acoustic operator A v = -(p'(rho0)/rho0) div(rho0 grad v), its spectral
/// calculus, and the wave system eps s_t + div(rho0 grad Phi) = 0,
/// eps Phi_t + (p'(rho0)/rho0) s = 0.
///
/// Radial grids only: the operator is tridiagonal and diagonalised exactly.
#pragma once

#include <functional>
#include <vector>

#include "lowmach/field.hpp"
#include "lowmach/params.hpp"
#include "lowmach/profile.hpp"

namespace lowmach {

/// Plateau [delta, 1/delta], support [delta/2, 2/delta], evaluated on sqrt(lambda).
struct FrequencyWindow {
  double delta;

  explicit FrequencyWindow(double d);
  double operator()(double z) const;
};

/// psi_delta: 1 for |x| < 1/delta, 0 for |x| > 2/delta.
double spatial_cutoff(double r, double delta);

class AcousticOperator {
 public:
  /// Assembles the matrix and computes all eigenpairs.  Throws DomainError on a
  /// cartesian grid and SolverError when the eigen residual is too large.
  AcousticOperator(const StaticProfile& prof, const Grid& g);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return grid_.size(); }

  /// A v.
  ScalarField apply(const ScalarField& v) const;
  /// div(rho0_f grad v), the unscaled flux part.
  ScalarField flux_laplacian(const ScalarField& v) const;

  const std::vector<double>& eigenvalues() const { return lambda_; }
  /// k-th eigenvector, orthonormal in the weighted inner product.
  ScalarField mode(std::size_t k) const;
  /// <h; e_k> for all k.
  std::vector<double> analyze(const ScalarField& h) const;
  /// sum_k c_k e_k; `rows` restricts evaluation to selected cells (others left 0).
  ScalarField synthesize(const std::vector<double>& c) const;
  ScalarField synthesize(const std::vector<double>& c, const std::vector<std::size_t>& rows) const;
  /// sum_k G(sqrt(lambda_k)) <h; e_k> e_k.
  ScalarField calculus(const std::function<double(double)>& G, const ScalarField& h) const;

  double inner(const ScalarField& u, const ScalarField& v) const;
  double norm(const ScalarField& u) const;

  /// p'(rho0)/rho0 and the weighted-mass diagonal vol * rho0/p'(rho0).
  const ScalarField& sound() const { return sound_; }
  const std::vector<double>& mass() const { return mass_; }

  /// Gershgorin bound on the largest eigenvalue (the leapfrog CFL uses it).
  double lambda_bound() const { return lambda_bound_; }
  /// max_k ||A e_k - lambda_k e_k|| / max(1, lambda_k) from assembly.
  double eigen_residual() const { return eigen_residual_; }

 private:
  Grid grid_;
  VectorField face_coef_;
  ScalarField sound_;
  std::vector<double> mass_;
  std::vector<double> lambda_;
  std::vector<double> modes_;  ///< column-major: mode k occupies [k n, (k+1) n)
  std::vector<double> rows_;   ///< row-major copy for synthesis
  double lambda_bound_ = 0.0;
  double eigen_residual_ = 0.0;
};

struct AcousticState {
  ScalarField s;
  ScalarField phi;
  double t = 0.0;
};

/// E_ac = 1/2 int [rho0 |grad Phi|^2 + (p'(rho0)/rho0) s^2].
double acoustic_energy(const AcousticOperator& A, const AcousticState& st);

/// Time derivatives from the equations: s_t = -div(rho0 grad Phi)/eps,
/// Phi_t = -(p'/rho0) s / eps.
AcousticState acoustic_rate(const AcousticOperator& A, const AcousticState& st, double eps);

/// Exact propagator in the eigenbasis.
class SpectralPropagator {
 public:
  SpectralPropagator(const AcousticOperator& A, const AcousticState& init, double eps);
  AcousticState at(double t) const;
  /// Evaluates only the listed cells (others 0); used by norms over a ball.
  AcousticState at(double t, const std::vector<std::size_t>& rows) const;
  double energy() const;

 private:
  const AcousticOperator* op_;
  double eps_;
  double t0_;
  std::vector<double> a_, b_;  ///< Phi and c s coefficients at t0
};

enum class AcousticScheme { spectral, leapfrog };

struct AcousticOptions {
  AcousticScheme scheme = AcousticScheme::spectral;
  std::vector<double> sample_times;
  double cfl = 0.9;        ///< leapfrog dt = cfl * 2 eps / sqrt(lambda_bound)
  double dt = 0.0;         ///< explicit leapfrog step; 0 selects from cfl
  bool sponge = false;     ///< damp (s, Phi) for r > r_sponge in leapfrog mode
  double sponge_rate = 0;  ///< peak damping rate; 0 selects 5 / horizon
};

struct AcousticTrajectory {
  std::vector<AcousticState> states;
  std::vector<double> energy;
};

/// Samples the evolution at the requested times (must be nondecreasing, >= init.t).
/// Leapfrog throws CflError when an explicit dt exceeds 2 eps / sqrt(lambda_bound).
AcousticTrajectory evolve_acoustic(const AcousticOperator& A, const AcousticState& init,
                                   const ScalingParams& params, const AcousticOptions& opt);

/// s0 = (1/c)[c rho1]_delta and Phi0 = [Phi0]_delta with [h]_delta = G_delta(sqrt A)[psi_delta h],
/// c = p'(rho0)/rho0.
AcousticState regularize_data(const AcousticOperator& A, const ScalarField& rho1,
                              const ScalarField& phi0, double delta);

/// int_0^T || 1_{|x|<radius} G(A) e^{i sqrt(A) t} h ||_2^2 dt (trapezoid, `steps` intervals).
double measure_local_decay(const AcousticOperator& A, const FrequencyWindow& window,
                           double radius, const ScalarField& h, double horizon, int steps = 400);

/// True when 1/p + 3/q = 1/2 within 1e-12.
bool strichartz_admissible(double p, double q);

/// (int_0^T || G(A) e^{i sqrt(A) t} h ||_q^p dt)^{1/p}; throws DomainError when
/// (p, q) is not admissible.
double measure_strichartz(const AcousticOperator& A, const FrequencyWindow& window,
                          const ScalarField& h, double p, double q, double horizon,
                          int steps = 400);

/// Time series (t, norm) behind the two measurements above.
struct NormSeries {
  std::vector<double> t, value;
};
NormSeries local_norm_series(const AcousticOperator& A, const FrequencyWindow& window,
                             double radius, const ScalarField& h, double horizon, int steps);
NormSeries lq_norm_series(const AcousticOperator& A, const FrequencyWindow& window,
                          const ScalarField& h, double q, double horizon, int steps);

/// R_sp / sqrt(gamma rho_bar^(gamma-1)): last time free of boundary reflections.
double crossing_time(const Grid& g, double gamma, double rho_bar);

}  // namespace lowmach
