#include "lowmach/primitive.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <istream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "lowmach/cutoff.hpp"
#include "lowmach/quadrature.hpp"

namespace lowmach {

namespace {

constexpr double kVacuum = 1e-10;
constexpr double kFloor = 1e-12;

void require_radial(const Grid& g, const char* what) {
  if (!g.is_radial()) throw DomainError(std::string(what) + " supports radial grids only");
}

}  // namespace

ScalarField PrimitiveState::theta() const {
  ScalarField th(rho.grid());
  for (std::size_t i = 0; i < th.size(); ++i)
    th[i] = rho[i] < kVacuum ? 1.0 : q[i] / std::max(rho[i], kFloor);
  return th;
}

VectorField PrimitiveState::velocity() const {
  VectorField u(rho.grid(), Staggering::cell);
  for (int d = 0; d < u.dim(); ++d)
    for (std::size_t i = 0; i < rho.size(); ++i) u[d][i] = rho[i] < kVacuum ? 0.0 : mom[d][i] / rho[i];
  return u;
}

double BumpSpec::operator()(double r) const {
  if (shape == "gaussian") return amplitude * std::exp(-(r / width) * (r / width));
  if (shape == "flat_top") return amplitude * (1.0 - smoothstep((r - width) / width));
  throw ValidationError("unknown bump shape '" + shape + "' (expected gaussian or flat_top)");
}

IllPreparedData DataSpec::build(const Grid& g) const {
  IllPreparedData d{ScalarField::from_radius(g, rho1), VectorField(g, Staggering::cell),
                    ScalarField::from_radius(g, theta2)};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.radius(i);
    d.u0[0][i] = r / velocity.width * velocity(r);
  }
  return d;
}

DataBounds data_bounds(const IllPreparedData& d, const Grid& g) {
  return {lp_norm(d.rho1, 1.0, g),   lp_norm(d.rho1, kInfinity, g), l2_norm(d.u0, g),
          d.u0.max_abs(),            lp_norm(d.theta2, 1.0, g),     lp_norm(d.theta2, kInfinity, g)};
}

PrimitiveState init_ill_prepared(const IllPreparedData& data, const StaticProfile& prof,
                                 const ScalingParams& params, const Grid& g) {
  require_aligned(data.rho1.grid(), g, "init_ill_prepared");
  require_aligned(data.u0.grid(), g, "init_ill_prepared");
  require_aligned(data.theta2.grid(), g, "init_ill_prepared");
  require_aligned(prof.grid, g, "init_ill_prepared");
  const double eps = params.eps;
  PrimitiveState s{ScalarField(g), VectorField(g, Staggering::cell), ScalarField(g), 0.0};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double rho = prof.rho0[i] + eps * data.rho1[i];
    if (!(rho > 0.0))
      throw DataError("initial density rho0 + eps rho1 is not positive at r = " +
                      std::to_string(g.radius(i)));
    const double theta = 1.0 + eps * eps * data.theta2[i];
    if (!(theta > 0.0)) throw DataError("initial Theta is not positive");
    s.rho[i] = rho;
    s.q[i] = rho * theta;
    for (int d = 0; d < s.mom.dim(); ++d) s.mom[d][i] = rho * data.u0[d][i];
  }
  return s;
}

PrimitiveSystem::PrimitiveSystem(const StaticProfile& prof, const ScalingParams& params,
                                 const Grid& g, bool use_omp, bool muscl)
    : prof_(prof), params_(params), grid_(g), use_omp_(use_omp), muscl_(muscl) {
  require_radial(g, "primitive solver");
  require_aligned(prof.grid, g, "PrimitiveSystem");
  params.validate(true);
  viscosity_ = std::pow(params.eps, params.alpha) * (4.0 / 3.0 + params.lambda);
  const std::size_t n = g.size();
  const double h = g.h();
  center_.resize(n);
  volume_.resize(n);
  area_.resize(n);
  grad_p0_.resize(n);
  sigma_.resize(n);
  std::vector<double> pf(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    center_[i] = g.center(i);
    volume_[i] = g.volume(i);
    area_[i] = g.face_area(i);
  }
  // face averages of p(rho0) with the same mirror images as the flux kernel
  auto p0 = [&](std::size_t i) { return pressure(prof.rho0[i], params.gamma); };
  pf[0] = p0(0);
  pf[n] = p0(n - 1);
  for (std::size_t f = 1; f < n; ++f) pf[f] = 0.5 * (p0(f - 1) + p0(f));
  for (std::size_t i = 0; i < n; ++i) grad_p0_[i] = (pf[i + 1] - pf[i]) / h;

  const double rate = 5.0 / params.horizon;
  for (std::size_t i = 0; i < n; ++i)
    sigma_[i] = rate * smoothstep((center_[i] - g.r_sponge()) / (g.r_max() - g.r_sponge()));
}

kernels::PrimitiveRhsInput PrimitiveSystem::input(const PrimitiveState& s) const {
  require_aligned(s.rho.grid(), grid_, "primitive state");
  return {grid_.size(),  grid_.h(),        params_.gamma,
          1.0 / (params_.eps * params_.eps), viscosity_,
          s.rho.values(), s.mom[0].values(), s.q.values(),
          prof_.rho0.values(), grad_p0_, center_, volume_, area_, muscl_};
}

PrimitiveRates PrimitiveSystem::rates(const PrimitiveState& s) const {
  PrimitiveRates r{ScalarField(grid_), VectorField(grid_, Staggering::cell), ScalarField(grid_)};
  kernels::PrimitiveWorkspace ws;
  const kernels::PrimitiveRhsOutput out{r.drho.values(), r.dmom[0].values(), r.dq.values()};
  if (use_omp_)
    kernels::omp::primitive_rhs(input(s), ws, out);
  else
    kernels::serial::primitive_rhs(input(s), ws, out);
  return r;
}

double PrimitiveSystem::stable_dt(const PrimitiveState& s, double cfl) const {
  const double inv_eps2 = 1.0 / (params_.eps * params_.eps);
  double a = 0.0, rho_min = kInfinity;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const double rho = s.rho[i];
    const double u = rho < kVacuum ? 0.0 : s.mom[0][i] / rho;
    const double theta = rho < kVacuum ? 1.0 : s.q[i] / std::max(rho, kFloor);
    const double qq = std::max(s.q[i], 0.0);
    a = std::max(a, std::abs(u) + std::sqrt(params_.gamma * std::pow(qq, params_.gamma - 1.0) *
                                            std::max(theta, 0.0) * inv_eps2));
    rho_min = std::min(rho_min, rho);
  }
  const double h = grid_.h();
  const double dt_wave = h / a;
  // explicit diffusion limit including the r = 0 face stencil
  const double dt_visc = viscosity_ > 0.0 ? 0.25 * h * h * std::max(rho_min, kFloor) / viscosity_ : kInfinity;
  return cfl * std::min(dt_wave, dt_visc);
}

namespace {

PrimitiveState axpy(const PrimitiveState& base, double a, const PrimitiveState& x, double b,
                    const PrimitiveRates* r, double c) {
  // a * base + b * x + c * r
  PrimitiveState out = base;
  for (std::size_t i = 0; i < base.rho.size(); ++i) {
    out.rho[i] = a * base.rho[i] + b * x.rho[i] + (r ? c * r->drho[i] : 0.0);
    out.mom[0][i] = a * base.mom[0][i] + b * x.mom[0][i] + (r ? c * r->dmom[0][i] : 0.0);
    out.q[i] = a * base.q[i] + b * x.q[i] + (r ? c * r->dq[i] : 0.0);
  }
  return out;
}

}  // namespace

PrimitiveState PrimitiveSystem::step(const PrimitiveState& s, double dt, StepStats* stats) const {
  const double limit = stable_dt(s, 0.4);
  if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12))
    throw CflError("primitive step violates the CFL limit", dt, limit);

  const PrimitiveRates k0 = rates(s);
  const PrimitiveState u1 = axpy(s, 1.0, s, 0.0, &k0, dt);
  const PrimitiveRates k1 = rates(u1);
  const PrimitiveState u2 = axpy(s, 0.75, u1, 0.25, &k1, 0.25 * dt);
  const PrimitiveRates k2 = rates(u2);
  PrimitiveState out = axpy(s, 1.0 / 3.0, u2, 2.0 / 3.0, &k2, 2.0 / 3.0 * dt);
  out.t = s.t + dt;

  const double rho_min = out.rho.min();
  if (!(rho_min > 0.0) || !(out.q.min() >= 0.0) || !out.rho.all_finite() || !out.mom.all_finite())
    throw NegativeDensityError("primitive update produced a negative or non-finite density at t = " +
                                   std::to_string(out.t),
                               rho_min, s);

  StepStats st;
  st.viscous_work = dt * (viscous_power(s) / 6.0 + viscous_power(u1) / 6.0 +
                          2.0 / 3.0 * viscous_power(u2));

  const double mass0 = integrate(out.rho, grid_), q0 = integrate(out.q, grid_);
  const double e0 = energy(out);
  bool any = false;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (sigma_[i] == 0.0) continue;
    any = true;
    const double f = std::exp(-sigma_[i] * dt);
    const double r0 = prof_.rho0[i];
    out.rho[i] = r0 + (out.rho[i] - r0) * f;
    out.q[i] = r0 + (out.q[i] - r0) * f;
    out.mom[0][i] *= f;
  }
  if (any) {
    st.sponge_mass = integrate(out.rho, grid_) - mass0;
    st.sponge_q = integrate(out.q, grid_) - q0;
    st.sponge_energy = energy(out) - e0;
  }
  if (stats) *stats = st;
  return out;
}

double PrimitiveSystem::energy(const PrimitiveState& s) const {
  const double gamma = params_.gamma;
  const double inv_eps2 = 1.0 / (params_.eps * params_.eps);
  double e = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const double rho = s.rho[i];
    const double m = s.mom[0][i];
    const double r0 = prof_.rho0[i];
    const double kin = rho < kVacuum ? 0.0 : 0.5 * m * m / rho;
    const double pot = pressure_potential(s.q[i], gamma) -
                       pressure_potential_d1(r0, gamma) * (rho - r0) - pressure_potential(r0, gamma);
    e += volume_[i] * (kin + pot * inv_eps2);
  }
  return e;
}

std::vector<double> PrimitiveSystem::face_divergence(const PrimitiveState& s) const {
  const std::size_t n = grid_.size();
  const double h = grid_.h();
  auto u = [&](std::size_t i) { return s.rho[i] < kVacuum ? 0.0 : s.mom[0][i] / s.rho[i]; };
  std::vector<double> d(n + 1);
  d[0] = 6.0 * u(0) / h;
  for (std::size_t f = 1; f <= n; ++f) {
    const double rf = static_cast<double>(f) * h;
    const double rl = center_[f - 1];
    const double ul = u(f - 1);
    const double rr = f == n ? rf + 0.5 * h : center_[f];
    const double ur = f == n ? -ul : u(f);
    d[f] = (rr * rr * ur - rl * rl * ul) / (rf * rf * h);
  }
  return d;
}

double PrimitiveSystem::viscous_power(const PrimitiveState& s) const {
  if (viscosity_ == 0.0) return 0.0;
  const std::vector<double> d = face_divergence(s);
  const double h = grid_.h();
  double p = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const double u = s.rho[i] < kVacuum ? 0.0 : s.mom[0][i] / s.rho[i];
    p -= volume_[i] * u * viscosity_ * (d[i + 1] - d[i]) / h;
  }
  return p;
}

ScalarField PrimitiveSystem::velocity_divergence(const PrimitiveState& s) const {
  const std::size_t n = grid_.size();
  const VectorField u = s.velocity();
  ScalarField div(grid_);
  for (std::size_t i = 0; i < n; ++i) {
    const double up = i + 1 < n ? 0.5 * (u[0][i] + u[0][i + 1]) : 0.0;
    double flux = area_[i] * up;
    if (i > 0) flux -= area_[i - 1] * 0.5 * (u[0][i - 1] + u[0][i]);
    div[i] = flux / volume_[i];
  }
  return div;
}

PrimitiveState step_primitive(const PrimitiveState& s, const StaticProfile& prof,
                              const ScalingParams& params, double dt, const Grid& g) {
  return PrimitiveSystem(prof, params, g).step(s, dt);
}

PrimitiveRun run_primitive(const PrimitiveState& init, const StaticProfile& prof,
                           const ScalingParams& params, const Grid& g,
                           const std::vector<double>& sample_times, const PrimitiveRunOptions& opt) {
  if (!(opt.cfl > 0.0 && opt.cfl <= 0.4)) throw DomainError("primitive CFL number must lie in (0, 0.4]");
  const PrimitiveSystem sys(prof, params, g, opt.use_omp, opt.muscl);
  PrimitiveRun run;
  PrimitiveState s = init;
  const double mass0 = integrate(init.rho, g), q0 = integrate(init.q, g);
  double dissipation = 0.0, sponge_mass = 0.0, sponge_q = 0.0, budget = 0.0;
  for (double target : sample_times) {
    if (target < s.t) throw DomainError("sample times must be nondecreasing");
    while (s.t < target) {
      double dt = sys.stable_dt(s, opt.cfl);
      const bool last = s.t + dt >= target;
      if (last) dt = target - s.t;
      StepStats st;
      s = sys.step(s, dt, &st);
      if (last) s.t = target;
      ++run.steps;
      dissipation += st.viscous_work;
      sponge_mass += st.sponge_mass;
      sponge_q += st.sponge_q;
      budget += std::max(st.sponge_energy, 0.0);
    }
    run.samples.push_back({s.t, sys.energy(s), dissipation,
                           integrate(s.rho, g) - mass0 - sponge_mass,
                           integrate(s.q, g) - q0 - sponge_q, budget});
    run.states.push_back(s);
  }
  return run;
}

double energy_inequality_violation(const PrimitiveRun& run, double energy0) {
  const double base = 1e-3 * std::abs(energy0);
  double worst = -kInfinity;
  const std::size_t m = run.samples.size();
  for (std::size_t j = 0; j < m; ++j) {
    const PrimitiveSample& b = run.samples[j];
    const double tol = base + b.sponge_budget;
    worst = std::max(worst, b.energy + b.dissipation - energy0 - tol);
    for (std::size_t i = 0; i < j; ++i) {
      const PrimitiveSample& a = run.samples[i];
      worst = std::max(worst, b.energy + (b.dissipation - a.dissipation) - a.energy - tol);
    }
  }
  return worst;
}

namespace {

// 4-point Gauss-Legendre on [a, b]; exact for polynomials of degree <= 7.
template <class F>
double gauss4(F&& f, double a, double b) {
  static constexpr std::array<double, 4> x{-0.8611363115940526, -0.3399810435848563,
                                           0.3399810435848563, 0.8611363115940526};
  static constexpr std::array<double, 4> w{0.3478548451374538, 0.6521451548625461,
                                           0.6521451548625461, 0.3478548451374538};
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  double s = 0.0;
  for (int k = 0; k < 4; ++k) s += w[k] * f(c + r * x[k]);
  return r * s;
}

}  // namespace

double RenormFunction::derivative(double y) const {
  const double taper = 1.0 - smoothstep((y - cap) / cap);
  switch (kind) {
    case Kind::constant: return 0.0;
    case Kind::linear: return taper;
    case Kind::quadratic: return 2.0 * y * taper;
  }
  return 0.0;
}

double RenormFunction::value(double y) const {
  if (kind == Kind::constant) return constant;
  const double below = std::min(y, cap);
  double v = kind == Kind::linear ? below : below * below;
  if (y > cap) v += gauss4([this](double s) { return derivative(s); }, cap, std::min(y, 2.0 * cap));
  return v;
}

std::vector<double> renorm_check(const PrimitiveSystem& sys, const std::vector<PrimitiveState>& states,
                                 const RenormFunction& b) {
  const Grid& g = sys.grid();
  std::vector<double> out;
  for (const PrimitiveState& s : states) {
    const PrimitiveRates r = sys.rates(s);
    const ScalarField div = sys.velocity_divergence(s);
    double lhs = 0.0, rhs = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double q = s.q[i];
      const double v = g.volume(i);
      lhs += v * b.derivative(q) * r.dq[i];
      rhs -= v * (b.derivative(q) * q - b.value(q)) * div[i];
      scale += v * std::abs(b.value(q));
    }
    out.push_back(scale > 0.0 ? std::abs(lhs - rhs) / scale : std::abs(lhs - rhs));
  }
  return out;
}

void write_checkpoint(std::ostream& os, const PrimitiveState& s, const ScalingParams& params) {
  const Grid& g = s.rho.grid();
  os << std::setprecision(17);
  os << "lowmach-checkpoint 1\n"
     << "byteorder " << (std::endian::native == std::endian::little ? "little" : "big") << "\n"
     << "geometry " << to_string(g.geometry()) << "\n"
     << "n " << g.n() << "\n"
     << "r_max " << g.r_max() << "\n"
     << "r_sponge " << g.r_sponge() << "\n"
     << "eps " << params.eps << "\n"
     << "alpha " << params.alpha << "\n"
     << "gamma " << params.gamma << "\n"
     << "lambda " << params.lambda << "\n"
     << "rho_bar " << params.rho_bar << "\n"
     << "horizon " << params.horizon << "\n"
     << "time " << s.t << "\n"
     << "fields rho mom q\n"
     << "count " << g.size() << "\n"
     << "END\n";
  for (const ScalarField* f : {&s.rho, &s.mom[0], &s.q})
    os.write(reinterpret_cast<const char*>(f->data()),
             static_cast<std::streamsize>(f->size() * sizeof(double)));
  if (!os) throw Error("checkpoint write failed");
}

Checkpoint read_checkpoint(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::getline(is, line);
  if (line != "lowmach-checkpoint 1") throw DataError("not a checkpoint file");
  while (std::getline(is, line) && line != "END") {
    const auto sp = line.find(' ');
    if (sp == std::string::npos) throw DataError("malformed checkpoint header line: " + line);
    kv[line.substr(0, sp)] = line.substr(sp + 1);
  }
  if (line != "END") throw DataError("checkpoint header is not terminated");
  auto num = [&](const std::string& k) {
    const auto it = kv.find(k);
    if (it == kv.end()) throw DataError("checkpoint header lacks '" + k + "'");
    return std::stod(it->second);
  };
  const std::string native = std::endian::native == std::endian::little ? "little" : "big";
  if (kv["byteorder"] != native) throw DataError("checkpoint byte order differs from this machine");
  if (kv["fields"] != "rho mom q") throw DataError("unexpected checkpoint field list");
  const Grid g = Grid::radial(static_cast<int>(num("n")), num("r_max"), num("r_sponge"));
  if (geometry_from_string(kv["geometry"]) != Geometry::radial)
    throw DataError("checkpoint geometry must be radial");
  if (static_cast<std::size_t>(num("count")) != g.size()) throw DataError("checkpoint count mismatch");
  ScalingParams p;
  p.eps = num("eps");
  p.alpha = num("alpha");
  p.gamma = num("gamma");
  p.lambda = num("lambda");
  p.rho_bar = num("rho_bar");
  p.horizon = num("horizon");
  PrimitiveState s{ScalarField(g), VectorField(g, Staggering::cell), ScalarField(g), num("time")};
  for (ScalarField* f : {&s.rho, &s.mom[0], &s.q})
    is.read(reinterpret_cast<char*>(f->data()), static_cast<std::streamsize>(f->size() * sizeof(double)));
  if (!is) throw DataError("checkpoint payload truncated");
  return {std::move(s), p};
}

void write_diagnostics_csv(std::ostream& os, const PrimitiveRun& run) {
  os << std::setprecision(17);
  os << "t,energy,dissipation,mass_defect,q_defect,sponge_budget\n";
  for (const PrimitiveSample& s : run.samples)
    os << s.t << ',' << s.energy << ',' << s.dissipation << ',' << s.mass_defect << ','
       << s.q_defect << ',' << s.sponge_budget << '\n';
}

}  // namespace lowmach
