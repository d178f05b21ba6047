#include "lowmach/relative_energy.hpp"

#include <algorithm>
#include <cmath>

#include "lowmach/error.hpp"
#include "lowmach/operators.hpp"
#include "lowmach/quadrature.hpp"

namespace lowmach {

namespace {

// Cell-centred d/dr.  Odd fields are mirrored with a sign change at r = 0; the
// outer cell uses a one-sided difference.
std::vector<double> radial_derivative(std::span<const double> f, double h, bool odd) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      const double ghost = odd ? -f[0] : f[0];
      d[i] = (f[1] - ghost) / (2.0 * h);
    } else if (i + 1 == n) {
      d[i] = (f[i] - f[i - 1]) / h;
    } else {
      d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    }
  }
  return d;
}

// Radial velocity gradient: du/dr and u/r at cell centres.
struct RadialGradient {
  std::vector<double> ur, hoop;
  double div(std::size_t i) const { return ur[i] + 2.0 * hoop[i]; }
};

RadialGradient radial_gradient(std::span<const double> u, const Grid& g) {
  RadialGradient gr{radial_derivative(u, g.h(), true), std::vector<double>(u.size())};
  for (std::size_t i = 0; i < u.size(); ++i) gr.hoop[i] = u[i] / g.center(i);
  return gr;
}

// S(grad a) : grad b with unit shear viscosity, both gradients radial.
double stress_contract(const RadialGradient& a, const RadialGradient& b, std::size_t i, double lambda) {
  return 2.0 * (a.ur[i] * b.ur[i] + 2.0 * a.hoop[i] * b.hoop[i]) +
         (lambda - 2.0 / 3.0) * a.div(i) * b.div(i);
}

// Trapezoid rule running integral.
std::vector<double> cumulative(const std::vector<double>& t, const std::vector<double>& f) {
  std::vector<double> c(t.size(), 0.0);
  for (std::size_t k = 1; k < t.size(); ++k) c[k] = c[k - 1] + 0.5 * (t[k] - t[k - 1]) * (f[k] + f[k - 1]);
  return c;
}

void require_radial(const Grid& g, const char* what) {
  if (!g.is_radial()) throw DomainError(std::string(what) + " supports radial grids only");
}

}  // namespace

double rel_energy(const PrimitiveState& s, const ScalarField& r, const VectorField& U,
                  const ScalingParams& params, const Grid& g) {
  require_aligned(s.rho.grid(), g, "rel_energy");
  require_aligned(r.grid(), g, "rel_energy");
  require_aligned(U.grid(), g, "rel_energy");
  if (!(r.min() > 0.0)) throw DomainError("rel_energy: test density r must be positive");
  const VectorField u = s.velocity();
  const double inv_eps2 = 1.0 / (params.eps * params.eps);
  double e = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double w2 = 0.0;
    for (int d = 0; d < u.dim(); ++d) {
      const double w = u[d][i] - U[d][i];
      w2 += w * w;
    }
    const double bracket = pressure_potential_bracket(s.q[i], r[i], params.gamma);
    e += g.volume(i) * (0.5 * s.rho[i] * w2 + bracket * inv_eps2);
  }
  return e;
}

std::vector<BoundMeasure> UniformBounds::all() const {
  return {kinetic, shear, bulk, temperature, essential, residual, velocity_h1};
}

UniformBounds uniform_bounds_report(const std::vector<PrimitiveState>& trajectory,
                                    const StaticProfile& prof, const ScalingParams& params,
                                    const Grid& g) {
  require_radial(g, "uniform_bounds_report");
  const double eps = params.eps;
  const double gamma = params.gamma;
  const double visc_scale = std::pow(eps, 0.5 * params.alpha);
  const EssResCutoff cut = EssResCutoff::for_profile(prof);

  std::vector<double> t, shear2, div2, h1;
  double kinetic = 0.0, temperature = 0.0, essential = 0.0, residual = 0.0, measure = 0.0, powers = 0.0;
  for (const PrimitiveState& s : trajectory) {
    require_aligned(s.rho.grid(), g, "uniform_bounds_report");
    const VectorField u = s.velocity();
    const RadialGradient gr = radial_gradient(u[0].values(), g);
    const ScalarField theta = s.theta();
    double k2 = 0.0, sh = 0.0, dv = 0.0, w12 = 0.0, t1 = 0.0, tinf = 0.0, m = 0.0, pw = 0.0;
    ScalarField drho(g), dq(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double v = g.volume(i);
      const double ui = u[0][i];
      k2 += v * s.rho[i] * ui * ui;
      const double d = gr.div(i);
      const double a = gr.ur[i] - d / 3.0, b = gr.hoop[i] - d / 3.0;
      sh += v * 4.0 * (a * a + 2.0 * b * b);
      dv += v * d * d;
      w12 += v * (ui * ui + gr.ur[i] * gr.ur[i] + 2.0 * gr.hoop[i] * gr.hoop[i]);
      const double th = std::abs(theta[i] - 1.0) / (eps * eps);
      t1 += v * th;
      tinf = std::max(tinf, th);
      drho[i] = (s.rho[i] - prof.rho0[i]) / eps;
      dq[i] = (s.q[i] - prof.rho0[i]) / eps;
      const double chi = cut.chi(s.q[i]);
      if (chi < 1.0) {
        const double res = 1.0 - chi;
        m += v * res;
        pw += v * (std::pow(res * s.rho[i], gamma) + std::pow(res * s.q[i], gamma));
      }
    }
    const double ess = lp_norm(ess_res_split(drho, s.q, cut).first, 2.0, g) +
                       lp_norm(ess_res_split(dq, s.q, cut).first, 2.0, g);
    kinetic = std::max(kinetic, std::sqrt(k2));
    temperature = std::max(temperature, t1 + tinf);
    essential = std::max(essential, ess);
    measure = std::max(measure, m);
    powers = std::max(powers, pw);
    residual = std::max(residual, m + pw);
    t.push_back(s.t);
    shear2.push_back(sh);
    div2.push_back(dv);
    h1.push_back(w12);
  }
  auto integral = [&](const std::vector<double>& f) { return t.size() > 1 ? cumulative(t, f).back() : 0.0; };
  UniformBounds ub;
  ub.kinetic = {"kinetic", kinetic, kinetic};
  const double shear = visc_scale * std::sqrt(integral(shear2));
  ub.shear = {"shear", shear, shear};
  const double bulk = visc_scale * std::sqrt(params.lambda) * std::sqrt(integral(div2));
  ub.bulk = {"bulk", bulk, bulk};
  ub.temperature = {"temperature", temperature, temperature};
  ub.essential = {"essential", essential, essential};
  ub.residual = {"residual", residual, residual / (eps * eps)};
  const double vel = visc_scale * std::sqrt(integral(h1));
  ub.velocity_h1 = {"velocity_h1", vel, vel};
  ub.residual_measure = measure;
  ub.residual_powers = powers;
  return ub;
}

double residual_pressure_integral(const std::vector<PrimitiveState>& trajectory,
                                  const StaticProfile& prof, double gamma, double radius,
                                  double beta, const Grid& g) {
  if (!(beta > 0.0 && beta < gamma / 3.0))
    throw DomainError("residual pressure exponent beta must satisfy 0 < beta < gamma/3");
  const EssResCutoff cut = EssResCutoff::for_profile(prof);
  std::vector<double> t, f;
  for (const PrimitiveState& s : trajectory) {
    require_aligned(s.q.grid(), g, "residual_pressure_integral");
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!(g.radius(i) < radius)) continue;
      const double res = (1.0 - cut.chi(s.q[i])) * s.q[i];
      if (res > 0.0) acc += g.volume(i) * std::pow(res, gamma + beta);
    }
    t.push_back(s.t);
    f.push_back(acc);
  }
  return t.size() > 1 ? cumulative(t, f).back() : 0.0;
}

double fit_log_slope(const std::vector<double>& eps, const std::vector<double>& values) {
  std::vector<double> x, y;
  bool zero_small = false;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (values[k] > 0.0) {
      x.push_back(std::log(eps[k]));
      y.push_back(std::log(values[k]));
    } else {
      zero_small = true;
    }
  }
  if (x.empty()) return std::nan("");
  if (x.size() == 1) return zero_small ? kInfinity : std::nan("");
  if (zero_small) {
    // zero values must sit at the small-eps end for "faster than any power"
    const double smallest_positive = *std::min_element(x.begin(), x.end());
    for (std::size_t k = 0; k < eps.size(); ++k)
      if (!(values[k] > 0.0) && std::log(eps[k]) > smallest_positive) return std::nan("");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return zero_small ? std::max(slope, kInfinity) : slope;
}

ReiReport rei_audit(const std::vector<PrimitiveState>& primitive,
                    const std::vector<AcousticState>& acoustic,
                    const std::vector<VectorField>& anelastic_velocity, const AcousticOperator& A,
                    const StaticProfile& prof, const ScalingParams& params, const Grid& g,
                    double energy_dissipated, double velocity_scale) {
  require_radial(g, "rei_audit");
  const std::size_t m = primitive.size();
  if (acoustic.size() != m || (!anelastic_velocity.empty() && anelastic_velocity.size() != m))
    throw AlignmentError("rei_audit: trajectories have different sample counts");
  for (std::size_t k = 0; k < m; ++k) {
    if (std::abs(primitive[k].t - acoustic[k].t) > 1e-12)
      throw AlignmentError("rei_audit: primitive and acoustic sample times differ");
    require_aligned(primitive[k].rho.grid(), g, "rei_audit");
    require_aligned(acoustic[k].s.grid(), g, "rei_audit");
  }
  if (m == 0) return {};

  const double eps = params.eps, gamma = params.gamma, lambda = params.lambda;
  const double inv_eps2 = 1.0 / (eps * eps);
  const double visc = std::pow(eps, params.alpha);
  const std::size_t n = g.size();
  const double h = g.h();

  auto velocity_v = [&](std::size_t k) {
    VectorField v(g, Staggering::cell);
    if (!anelastic_velocity.empty()) v = to_cells(anelastic_velocity[k]);
    return v;
  };
  auto grad_cells = [&](const ScalarField& f) { return to_cells(face_gradient(f)); };

  std::vector<double> t(m), erel(m), diss_rate(m), mom(m), pres(m), buoy(m);
  for (std::size_t k = 0; k < m; ++k) {
    const PrimitiveState& s = primitive[k];
    const AcousticState& ac = acoustic[k];
    const AcousticState rate = acoustic_rate(A, ac, eps);
    t[k] = s.t;

    VectorField U = velocity_v(k) + grad_cells(ac.phi);
    VectorField Ut = grad_cells(rate.phi);
    if (!anelastic_velocity.empty() && m > 1) {
      // dV/dt by differences on the sample mesh
      const std::size_t a = k == 0 ? 0 : k - 1, b = k + 1 < m ? k + 1 : m - 1;
      VectorField dv = velocity_v(b) - velocity_v(a);
      dv *= 1.0 / (primitive[b].t - primitive[a].t);
      Ut += dv;
    }
    U *= velocity_scale;
    Ut *= velocity_scale;

    ScalarField r(g);
    for (std::size_t i = 0; i < n; ++i) r[i] = prof.rho0[i] + eps * ac.s[i];
    erel[k] = rel_energy(s, r, U, params, g);

    const VectorField u = s.velocity();
    const RadialGradient gu = radial_gradient(u[0].values(), g);
    const RadialGradient gU = radial_gradient(U[0].values(), g);
    std::vector<double> wvals(n);
    for (std::size_t i = 0; i < n; ++i) wvals[i] = u[0][i] - U[0][i];
    const RadialGradient gw = radial_gradient(wvals, g);
    const std::vector<double> ds_dr = radial_derivative(ac.s.values(), h, false);

    double dr = 0.0, i1 = 0.0, i2 = 0.0, i3 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = g.volume(i);
      const double rho = s.rho[i], q = s.q[i], ui = u[0][i], Ui = U[0][i];
      dr += v * visc * stress_contract(gw, gw, i, lambda);
      // rho (U_t + u . grad U) . (U - u) + eps^alpha S(grad U) : grad(U - u)
      i1 += v * (rho * (Ut[0][i] + ui * gU.ur[i]) * (Ui - ui) - visc * stress_contract(gU, gw, i, lambda));
      const double h2 = pressure_potential_d2(r[i], gamma);
      const double dtH = h2 * eps * rate.s[i];
      const double gradH = h2 * (prof.grad_rho0[0][i] + eps * ds_dr[i]);
      i2 += v * ((r[i] - q) * dtH + gradH * (r[i] * Ui - q * ui));
      i3 -= v * (gU.div(i) * (std::pow(q, gamma) - std::pow(r[i], gamma)) +
                 rho * prof.grad_potential[0][i] * (Ui - ui));
    }
    diss_rate[k] = dr;
    mom[k] = i1;
    pres[k] = i2 * inv_eps2;
    buoy[k] = i3 * inv_eps2;
  }

  const std::vector<double> D = cumulative(t, diss_rate), M = cumulative(t, mom),
                            P = cumulative(t, pres), B = cumulative(t, buoy);
  ReiReport rep;
  rep.tolerance = 1e-2 * std::max(erel[0], energy_dissipated);
  rep.max_defect = -kInfinity;
  for (std::size_t k = 0; k < m; ++k) {
    ReiSample x{t[k], erel[k], D[k], erel[k] - erel[0] + D[k], M[k], P[k], B[k], 0.0, 0.0};
    x.rhs = x.momentum + x.pressure + x.buoyancy;
    x.defect = x.lhs - x.rhs;
    rep.max_defect = std::max(rep.max_defect, x.defect);
    rep.samples.push_back(x);
  }
  rep.holds = rep.max_defect <= rep.tolerance;
  return rep;
}

}  // namespace lowmach
