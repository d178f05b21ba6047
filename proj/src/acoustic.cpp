#include "lowmach/acoustic.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "lowmach/cutoff.hpp"
#include "lowmach/error.hpp"
#include "lowmach/kernels.hpp"
#include "lowmach/operators.hpp"
#include "lowmach/quadrature.hpp"

namespace lowmach {

FrequencyWindow::FrequencyWindow(double d) : delta(d) {
  if (!(d > 0.0 && d < 1.0)) throw DomainError("frequency window needs 0 < delta < 1");
}

double FrequencyWindow::operator()(double z) const {
  const double a = std::abs(z);
  const double lo = 0.5 * delta;
  const double hi = 1.0 / delta;
  return smoothstep((a - lo) / lo) * (1.0 - smoothstep((a - hi) / hi));
}

double spatial_cutoff(double r, double delta) {
  const double hi = 1.0 / delta;
  return 1.0 - smoothstep((r - hi) / hi);
}

double crossing_time(const Grid& g, double gamma, double rho_bar) {
  return g.r_sponge() / std::sqrt(gamma * std::pow(rho_bar, gamma - 1.0));
}

AcousticOperator::AcousticOperator(const StaticProfile& prof, const Grid& g)
    : grid_(g), face_coef_(face_coefficients(prof.rho0)), sound_(prof.sound_coefficient()) {
  require_aligned(prof.grid, g, "AcousticOperator");
  if (!g.is_radial()) throw DomainError("acoustic eigendecomposition needs a radial grid");
  const std::size_t n = g.size();
  const double h = g.h();
  mass_.resize(n);
  for (std::size_t i = 0; i < n; ++i) mass_[i] = g.volume(i) / sound_[i];

  // K = -vol * L is tridiagonal; S = M^{-1/2} K M^{-1/2}.
  Eigen::VectorXd diag(n), sub(n - 1);
  const auto& fc = face_coef_[0];
  for (std::size_t i = 0; i < n; ++i) {
    double k = g.face_area(i) * fc[i] / g.face_distance(i);
    if (i > 0) k += g.face_area(i - 1) * fc[i - 1] / h;
    diag[i] = k / mass_[i];
    if (i + 1 < n) sub[i] = -g.face_area(i) * fc[i] / h / std::sqrt(mass_[i] * mass_[i + 1]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row += std::abs(sub[i - 1]);
    if (i + 1 < n) row += std::abs(sub[i]);
    lambda_bound_ = std::max(lambda_bound_, row);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw SolverError("acoustic eigensolver failed", kInfinity);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const Eigen::MatrixXd& y = es.eigenvectors();

  lambda_.assign(ev.data(), ev.data() + n);
  modes_.resize(n * n);
  rows_.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double sy = diag[i] * y(i, k);
      if (i > 0) sy += sub[i - 1] * y(i - 1, k);
      if (i + 1 < n) sy += sub[i] * y(i + 1, k);
      const double d = sy - ev[k] * y(i, k);
      res += d * d;
      const double e = y(i, k) / std::sqrt(mass_[i]);
      modes_[k * n + i] = e;
      rows_[i * n + k] = e;
    }
    eigen_residual_ = std::max(eigen_residual_, std::sqrt(res) / std::max(1.0, std::abs(ev[k])));
  }
  if (eigen_residual_ > 1e-8)
    throw SolverError("acoustic eigenpairs inaccurate (residual " + std::to_string(eigen_residual_) + ")",
                      eigen_residual_);
}

ScalarField AcousticOperator::flux_laplacian(const ScalarField& v) const {
  require_aligned(v.grid(), grid_, "AcousticOperator");
  return weighted_laplacian(v, face_coef_);
}

ScalarField AcousticOperator::apply(const ScalarField& v) const {
  ScalarField out = flux_laplacian(v);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= -sound_[i];
  return out;
}

ScalarField AcousticOperator::mode(std::size_t k) const {
  const std::size_t n = size();
  return ScalarField(grid_, std::vector<double>(modes_.begin() + k * n, modes_.begin() + (k + 1) * n));
}

std::vector<double> AcousticOperator::analyze(const ScalarField& h) const {
  require_aligned(h.grid(), grid_, "analyze");
  const std::size_t n = size();
  std::vector<double> x(n), c(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = mass_[i] * h[i];
  kernels::omp::analyze(modes_, n, x, c);
  return c;
}

ScalarField AcousticOperator::synthesize(const std::vector<double>& c,
                                         const std::vector<std::size_t>& rows) const {
  ScalarField out(grid_);
  kernels::omp::synthesize(rows_, size(), c, rows, out.values());
  return out;
}

ScalarField AcousticOperator::synthesize(const std::vector<double>& c) const {
  std::vector<std::size_t> all(size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return synthesize(c, all);
}

ScalarField AcousticOperator::calculus(const std::function<double(double)>& G,
                                       const ScalarField& h) const {
  std::vector<double> c = analyze(h);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= G(std::sqrt(std::max(lambda_[k], 0.0)));
  return synthesize(c);
}

double AcousticOperator::inner(const ScalarField& u, const ScalarField& v) const {
  require_aligned(u.grid(), grid_, "inner");
  require_aligned(v.grid(), grid_, "inner");
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += mass_[i] * u[i] * v[i];
  return s;
}

double AcousticOperator::norm(const ScalarField& u) const { return std::sqrt(inner(u, u)); }

double acoustic_energy(const AcousticOperator& A, const AcousticState& st) {
  const ScalarField lphi = A.flux_laplacian(st.phi);
  const Grid& g = A.grid();
  double kinetic = 0.0, potential = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    kinetic -= g.volume(i) * st.phi[i] * lphi[i];  // = int rho0 |grad Phi|^2 by summation by parts
    potential += g.volume(i) * A.sound()[i] * st.s[i] * st.s[i];
  }
  return 0.5 * (kinetic + potential);
}

AcousticState acoustic_rate(const AcousticOperator& A, const AcousticState& st, double eps) {
  AcousticState r{A.flux_laplacian(st.phi), ScalarField(A.grid()), st.t};
  r.s *= -1.0 / eps;
  for (std::size_t i = 0; i < r.phi.size(); ++i) r.phi[i] = -A.sound()[i] * st.s[i] / eps;
  return r;
}

SpectralPropagator::SpectralPropagator(const AcousticOperator& A, const AcousticState& init, double eps)
    : op_(&A), eps_(eps), t0_(init.t) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  a_ = A.analyze(init.phi);
  ScalarField w = init.s;
  w *= A.sound();
  b_ = A.analyze(w);
}

AcousticState SpectralPropagator::at(double t, const std::vector<std::size_t>& rows) const {
  const std::vector<double>& lam = op_->eigenvalues();
  const double tau = (t - t0_) / eps_;
  std::vector<double> cp(a_.size()), cw(a_.size());
  for (std::size_t k = 0; k < a_.size(); ++k) {
    const double om = std::sqrt(std::max(lam[k], 0.0));
    const double c = std::cos(om * tau), s = std::sin(om * tau);
    // Phi' = -w, w' = A Phi in tau
    cp[k] = a_[k] * c - (om > 0.0 ? b_[k] / om * s : b_[k] * tau);
    cw[k] = b_[k] * c + a_[k] * om * s;
  }
  AcousticState st{op_->synthesize(cw, rows), op_->synthesize(cp, rows), t};
  for (std::size_t r : rows) st.s[r] /= op_->sound()[r];
  return st;
}

AcousticState SpectralPropagator::at(double t) const {
  std::vector<std::size_t> all(op_->size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return at(t, all);
}

double SpectralPropagator::energy() const {
  const std::vector<double>& lam = op_->eigenvalues();
  double e = 0.0;
  for (std::size_t k = 0; k < a_.size(); ++k) e += lam[k] * a_[k] * a_[k] + b_[k] * b_[k];
  return 0.5 * e;
}

namespace {

void check_samples(const std::vector<double>& times, double t0) {
  double prev = t0;
  for (double t : times) {
    if (!(t >= prev)) throw DomainError("sample times must be nondecreasing and start after the initial time");
    prev = t;
  }
}

AcousticTrajectory evolve_leapfrog(const AcousticOperator& A, const AcousticState& init,
                                   const ScalingParams& params, const AcousticOptions& opt) {
  const double eps = params.eps;
  const double dt_max = 2.0 * eps / std::sqrt(A.lambda_bound());
  const double dt = opt.dt > 0.0 ? opt.dt : opt.cfl * dt_max;
  if (dt > dt_max) throw CflError("leapfrog step exceeds the acoustic stability limit", dt, dt_max);

  const Grid& g = A.grid();
  const std::size_t n = g.size();
  std::vector<double> sigma(n, 0.0);
  if (opt.sponge) {
    const double rate = opt.sponge_rate > 0.0 ? opt.sponge_rate : 5.0 / params.horizon;
    for (std::size_t i = 0; i < n; ++i)
      sigma[i] = rate * smoothstep((g.radius(i) - g.r_sponge()) / (g.r_max() - g.r_sponge()));
  }

  // w = (p'/rho0) s; Phi_t = -w / eps, w_t = A Phi / eps
  ScalarField phi = init.phi;
  ScalarField w = init.s;
  w *= A.sound();
  double t = init.t;
  AcousticTrajectory out;
  auto record = [&] {
    AcousticState st{w, phi, t};
    for (std::size_t i = 0; i < n; ++i) st.s[i] /= A.sound()[i];
    out.energy.push_back(acoustic_energy(A, st));
    out.states.push_back(std::move(st));
  };
  for (double target : opt.sample_times) {
    while (t < target) {
      const double step = std::min(dt, target - t);
      const double k = step / eps;
      for (std::size_t i = 0; i < n; ++i) phi[i] -= 0.5 * k * w[i];
      const ScalarField aphi = A.apply(phi);
      for (std::size_t i = 0; i < n; ++i) w[i] += k * aphi[i];
      for (std::size_t i = 0; i < n; ++i) phi[i] -= 0.5 * k * w[i];
      if (opt.sponge) {
        for (std::size_t i = 0; i < n; ++i) {
          const double damp = std::exp(-sigma[i] * step);
          phi[i] *= damp;
          w[i] *= damp;
        }
      }
      t = (target - t <= dt) ? target : t + step;
    }
    record();
  }
  return out;
}

}  // namespace

AcousticTrajectory evolve_acoustic(const AcousticOperator& A, const AcousticState& init,
                                   const ScalingParams& params, const AcousticOptions& opt) {
  if (!(params.eps > 0.0)) throw DomainError("eps must be positive");
  require_aligned(init.s.grid(), A.grid(), "evolve_acoustic");
  require_aligned(init.phi.grid(), A.grid(), "evolve_acoustic");
  check_samples(opt.sample_times, init.t);
  if (opt.scheme == AcousticScheme::leapfrog) return evolve_leapfrog(A, init, params, opt);

  const SpectralPropagator prop(A, init, params.eps);
  AcousticTrajectory out;
  for (double t : opt.sample_times) {
    out.states.push_back(prop.at(t));
    out.energy.push_back(acoustic_energy(A, out.states.back()));
  }
  return out;
}

AcousticState regularize_data(const AcousticOperator& A, const ScalarField& rho1,
                              const ScalarField& phi0, double delta) {
  const FrequencyWindow G(delta);
  const Grid& g = A.grid();
  ScalarField cs = rho1;
  ScalarField p = phi0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double psi = spatial_cutoff(g.radius(i), delta);
    cs[i] *= A.sound()[i] * psi;
    p[i] *= psi;
  }
  AcousticState out{A.calculus(G, cs), A.calculus(G, p), 0.0};
  for (std::size_t i = 0; i < g.size(); ++i) out.s[i] /= A.sound()[i];
  return out;
}

bool strichartz_admissible(double p, double q) {
  return p >= 1.0 && q >= 1.0 && std::abs(1.0 / p + 3.0 / q - 0.5) <= 1e-12;
}

namespace {

// |G(A) e^{i sqrt(A) t} h| pointwise on `rows` (complex modulus of the cos/sin parts).
class WindowedWave {
 public:
  WindowedWave(const AcousticOperator& A, const FrequencyWindow& window, const ScalarField& h)
      : op_(&A), c_(A.analyze(h)) {
    for (std::size_t k = 0; k < c_.size(); ++k)
      c_[k] *= window(std::sqrt(std::max(A.eigenvalues()[k], 0.0)));
  }

  ScalarField modulus(double t, const std::vector<std::size_t>& rows) const {
    const auto& lam = op_->eigenvalues();
    std::vector<double> cc(c_.size()), ss(c_.size());
    for (std::size_t k = 0; k < c_.size(); ++k) {
      const double om = std::sqrt(std::max(lam[k], 0.0));
      cc[k] = c_[k] * std::cos(om * t);
      ss[k] = c_[k] * std::sin(om * t);
    }
    ScalarField re = op_->synthesize(cc, rows);
    const ScalarField im = op_->synthesize(ss, rows);
    for (std::size_t r : rows) re[r] = std::hypot(re[r], im[r]);
    return re;
  }

 private:
  const AcousticOperator* op_;
  std::vector<double> c_;
};

std::vector<std::size_t> ball_rows(const Grid& g, double radius) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.radius(i) < radius) rows.push_back(i);
  return rows;
}

double trapezoid(const NormSeries& s, double power) {
  double acc = 0.0;
  for (std::size_t i = 1; i < s.t.size(); ++i)
    acc += 0.5 * (s.t[i] - s.t[i - 1]) *
           (std::pow(s.value[i - 1], power) + std::pow(s.value[i], power));
  return acc;
}

void check_horizon(double horizon, int steps) {
  if (!(horizon > 0.0) || steps < 1) throw DomainError("measurement needs a positive horizon and steps >= 1");
}

}  // namespace

NormSeries local_norm_series(const AcousticOperator& A, const FrequencyWindow& window,
                             double radius, const ScalarField& h, double horizon, int steps) {
  check_horizon(horizon, steps);
  const WindowedWave wave(A, window, h);
  const std::vector<std::size_t> rows = ball_rows(A.grid(), radius);
  NormSeries s;
  for (int j = 0; j <= steps; ++j) {
    const double t = horizon * j / steps;
    s.t.push_back(t);
    s.value.push_back(lp_norm(wave.modulus(t, rows), 2.0, A.grid(), radius));
  }
  return s;
}

NormSeries lq_norm_series(const AcousticOperator& A, const FrequencyWindow& window,
                          const ScalarField& h, double q, double horizon, int steps) {
  check_horizon(horizon, steps);
  const WindowedWave wave(A, window, h);
  const std::vector<std::size_t> rows = ball_rows(A.grid(), kInfinity);
  NormSeries s;
  for (int j = 0; j <= steps; ++j) {
    const double t = horizon * j / steps;
    s.t.push_back(t);
    s.value.push_back(lp_norm(wave.modulus(t, rows), q, A.grid()));
  }
  return s;
}

double measure_local_decay(const AcousticOperator& A, const FrequencyWindow& window, double radius,
                           const ScalarField& h, double horizon, int steps) {
  return trapezoid(local_norm_series(A, window, radius, h, horizon, steps), 2.0);
}

double measure_strichartz(const AcousticOperator& A, const FrequencyWindow& window,
                          const ScalarField& h, double p, double q, double horizon, int steps) {
  if (!strichartz_admissible(p, q))
    throw DomainError("exponents (" + std::to_string(p) + ", " + std::to_string(q) +
                      ") violate the admissibility relation 1/p + 3/q = 1/2");
  return std::pow(trapezoid(lq_norm_series(A, window, h, q, horizon, steps), p), 1.0 / p);
}

}  // namespace lowmach
