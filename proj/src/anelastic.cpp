#include "lowmach/anelastic.hpp"

#include <algorithm>
#include <cmath>

#include "lowmach/error.hpp"
#include "lowmach/helmholtz.hpp"
#include "lowmach/operators.hpp"
#include "lowmach/quadrature.hpp"

namespace lowmach {

namespace {

std::size_t stride(const Grid& g, int d) {
  const auto n = static_cast<std::size_t>(g.n());
  return d == 0 ? n * n : (d == 1 ? n : 1);
}

// Axis index of cell c along direction d.
int axis(const Grid& g, std::size_t c, int d) {
  return static_cast<int>((c / stride(g, d)) % static_cast<std::size_t>(g.n()));
}

// Upwind V . grad V on face data.  Radial: u du/dr; cartesian: every component
// at its own face, transverse velocities averaged from the four nearest faces.
VectorField advection(const VectorField& V) {
  const Grid& g = V.grid();
  VectorField out(g, Staggering::face);
  const double h = g.h();
  if (g.is_radial()) {
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double u = V[0][i];
      const double lo = i > 0 ? V[0][i - 1] : 0.0;  // u = 0 at r = 0
      const double hi = i + 1 < n ? V[0][i + 1] : u;
      out[0][i] = u * (u > 0.0 ? (u - lo) / h : (hi - u) / h);
    }
    return out;
  }
  const int n = g.n();
  auto value = [&](int d, std::size_t c, int e, int shift) -> double {
    // V_d at the face of cell c shifted by `shift` cells along e; 0 outside
    const int a = axis(g, c, e) + shift;
    if (a < 0 || a >= n) return 0.0;
    return V[d][shift >= 0 ? c + static_cast<std::size_t>(shift) * stride(g, e)
                           : c - static_cast<std::size_t>(-shift) * stride(g, e)];
  };
  for (std::size_t c = 0; c < g.size(); ++c) {
    for (int d = 0; d < 3; ++d) {
      if (axis(g, c, d) + 1 == n) continue;  // wall face
      const double vd = V[d][c];
      double acc = 0.0;
      for (int e = 0; e < 3; ++e) {
        double ve = vd;
        if (e != d) {
          // faces of cells c and c + e_d, lower and upper along e
          const std::size_t cn = c + stride(g, d);
          ve = 0.25 * (value(e, c, e, 0) + value(e, c, e, -1) + value(e, cn, e, 0) + value(e, cn, e, -1));
        }
        const double lo = value(d, c, e, -1);
        const double hi = value(d, c, e, 1);
        acc += ve * (ve > 0.0 ? (vd - lo) / h : (hi - vd) / h);
      }
      out[d][c] = acc;
    }
  }
  return out;
}

ScalarField density_of(const StaticProfile& prof, const ScalarField& T) {
  ScalarField R(T.grid());
  for (std::size_t i = 0; i < R.size(); ++i) R[i] = prof.rho0[i] / T[i];
  return R;
}

}  // namespace

AnelasticState init_anelastic(const VectorField& v0, const ScalarField& theta2,
                              const StaticProfile& prof, const Grid& g, double tolerance) {
  require_aligned(v0.grid(), g, "init_anelastic");
  require_aligned(theta2.grid(), g, "init_anelastic");
  if (!(theta2.min() > 0.0)) throw DataError("initial temperature theta2 must be positive everywhere");
  auto [V, phi] = project(v0, prof, g, tolerance);
  return {std::move(V), ScalarField(g), theta2, density_of(prof, theta2), 0.0};
}

double anelastic_dt_limit(const AnelasticState& s) {
  const Grid& g = s.V.grid();
  double speed = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    double sum = 0.0;
    for (int d = 0; d < s.V.dim(); ++d) {
      double v = std::abs(s.V[d][c]);
      if (g.is_radial()) {
        if (c > 0) v = std::max(v, std::abs(s.V[d][c - 1]));
      } else if (axis(g, c, d) > 0) {
        v = std::max(v, std::abs(s.V[d][c - stride(g, d)]));
      }
      sum += v;
    }
    speed = std::max(speed, sum);
  }
  return speed > 0.0 ? 0.4 * g.h() / speed : kInfinity;
}

AnelasticState step_anelastic(const AnelasticState& s, const StaticProfile& prof, double dt,
                              const Grid& g, double tolerance) {
  require_aligned(s.V.grid(), g, "step_anelastic");
  const double limit = anelastic_dt_limit(s);
  if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12))
    throw CflError("anelastic step violates the advective CFL limit", dt, limit);

  // predictor: V* = V - dt (V . grad V + T_f grad_f F)
  VectorField vs = s.V;
  const VectorField adv = advection(s.V);
  const VectorField gF = face_gradient(prof.potential_field);
  VectorField tf(g, Staggering::cell);
  for (int d = 0; d < tf.dim(); ++d) tf[d] = s.T;
  const VectorField tface = to_faces(tf);
  for (int d = 0; d < vs.dim(); ++d)
    for (std::size_t c = 0; c < g.size(); ++c)
      vs[d][c] -= dt * (adv[d][c] + tface[d][c] * gF[d][c]);

  auto [V, phi] = project_weighted(vs, prof.rho0, tolerance);
  AnelasticState out{std::move(V), std::move(phi), s.T, s.R, s.t + dt};
  out.Pi *= 1.0 / dt;

  // conservative upwind transport of rho0 T with flux rho0_f V T_up
  const VectorField rf = face_coefficients(prof.rho0);
  VectorField flux(g, Staggering::face);
  for (int d = 0; d < flux.dim(); ++d)
    for (std::size_t c = 0; c < g.size(); ++c) {
      const double v = out.V[d][c];
      double up = s.T[c];
      if (v < 0.0) {
        if (g.is_radial())
          up = c + 1 < g.size() ? s.T[c + 1] : s.T[c];
        else
          up = axis(g, c, d) + 1 < g.n() ? s.T[c + stride(g, d)] : s.T[c];
      }
      flux[d][c] = rf[d][c] * v * up;
    }
  const ScalarField div = face_divergence(flux);
  for (std::size_t c = 0; c < g.size(); ++c) out.T[c] = (prof.rho0[c] * s.T[c] - dt * div[c]) / prof.rho0[c];
  out.R = density_of(prof, out.T);
  return out;
}

double divergence_defect(const AnelasticState& s, const StaticProfile& prof) {
  const double num = weighted_divergence_norm(s.V, prof.rho0);
  const VectorField rf = face_coefficients(prof.rho0);
  VectorField m = s.V;
  for (int d = 0; d < m.dim(); ++d) m[d] *= rf[d];
  const double den = std::sqrt(face_inner(m, m));
  return den > 0.0 ? num / den : num;
}

AnelasticRun run_anelastic(const AnelasticState& init, const StaticProfile& prof, const Grid& g,
                           const std::vector<double>& sample_times, double max_dt, double tolerance) {
  if (!(max_dt > 0.0)) throw DomainError("anelastic run needs a positive maximal step");
  AnelasticRun run;
  AnelasticState s = init;
  for (double target : sample_times) {
    if (target < s.t) throw DomainError("sample times must be nondecreasing");
    while (s.t < target) {
      // split the remaining time evenly so that no sliver step is left over (Pi = phi / dt)
      const double remaining = target - s.t;
      const double cap = std::min(anelastic_dt_limit(s), max_dt);
      const double pieces = std::isfinite(cap) ? std::ceil(remaining / cap) : 1.0;
      const double dt = remaining / std::max(pieces, 1.0);
      const bool last = pieces <= 1.0;
      s = step_anelastic(s, prof, dt, g, tolerance);
      if (last) s.t = target;
      ++run.steps;
    }
    run.divergence_defect.push_back(divergence_defect(s, prof));
    run.states.push_back(s);
  }
  return run;
}

double sobolev_surrogate(const ScalarField& f) {
  const Grid& g = f.grid();
  const double h = g.h();
  const int dims = g.is_radial() ? 1 : 3;
  const int n = g.n();
  double s = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    double acc = f[c] * f[c];
    for (int d = 0; d < dims; ++d) {
      const int a = g.is_radial() ? static_cast<int>(c) : axis(g, c, d);
      const std::size_t st = g.is_radial() ? 1 : stride(g, d);
      if (a == 0 || a + 1 == n) continue;  // interior centred stencils only
      const double lo = f[c - st], hi = f[c + st];
      const double d1 = (hi - lo) / (2.0 * h);
      const double d2 = (hi - 2.0 * f[c] + lo) / (h * h);
      acc += d1 * d1 + d2 * d2;
    }
    s += g.volume(c) * acc;
  }
  return s;
}

SmoothnessReport smoothness_monitor(const std::vector<AnelasticState>& trajectory) {
  SmoothnessReport rep;
  for (const AnelasticState& s : trajectory) {
    const VectorField vc = to_cells(s.V);
    double vel = 0.0;
    for (int d = 0; d < vc.dim(); ++d) vel += sobolev_surrogate(vc[d]);
    rep.samples.push_back({s.t, vel, sobolev_surrogate(s.Pi), sobolev_surrogate(s.R)});
  }
  if (rep.samples.empty()) return rep;
  const SmoothnessSample& first = rep.samples.front();
  // tiny initial values (V = 0 in radial mode) get an absolute floor
  auto grew = [](double now, double initial) { return now > 1e3 * std::max(initial, 1e-20); };
  for (const SmoothnessSample& x : rep.samples)
    if (grew(x.velocity, first.velocity) || grew(x.density, first.density)) rep.blowup = true;
  // Pi is undefined before the first step, so it is compared with its first stepped value
  if (rep.samples.size() > 1) {
    const double p0 = rep.samples[1].pressure;
    for (std::size_t k = 1; k < rep.samples.size(); ++k)
      if (grew(rep.samples[k].pressure, p0)) rep.blowup = true;
  }
  return rep;
}

}  // namespace lowmach
