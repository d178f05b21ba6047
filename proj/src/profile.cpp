#include "lowmach/profile.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "lowmach/error.hpp"

namespace lowmach {

double PotentialSpec::value(double r) const {
  return amplitude / std::sqrt(core * core + r * r);
}

double PotentialSpec::d1(double r) const {
  const double s = core * core + r * r;
  return -amplitude * r / (s * std::sqrt(s));
}

double PotentialSpec::d2(double r) const {
  const double s = core * core + r * r;
  return amplitude * (2.0 * r * r - core * core) / (s * s * std::sqrt(s));
}

double enthalpy_q(double rho, double gamma) {
  return gamma / (gamma - 1.0) * std::pow(rho, gamma - 1.0);
}

double enthalpy_q_inverse(double y, double gamma) {
  return std::pow((gamma - 1.0) / gamma * y, 1.0 / (gamma - 1.0));
}

ProfilePoint profile_at(const PotentialSpec& spec, double r, double gamma, double rho_bar) {
  // rho0 = ((gamma-1)/gamma F + rho_bar^(gamma-1))^(1/(gamma-1)); Q'(rho0) rho0' = F'
  const double base = (gamma - 1.0) / gamma * spec.value(r) + std::pow(rho_bar, gamma - 1.0);
  const double rho = std::pow(base, 1.0 / (gamma - 1.0));
  const double drho = spec.d1(r) * std::pow(rho, 2.0 - gamma) / gamma;
  const double d2rho = (spec.d2(r) * std::pow(rho, 2.0 - gamma) +
                        spec.d1(r) * (2.0 - gamma) * std::pow(rho, 1.0 - gamma) * drho) /
                       gamma;
  return {rho, drho, d2rho};
}

ScalarField StaticProfile::acoustic_weight() const {
  ScalarField w(grid);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = rho0[i] / p_prime[i];
  return w;
}

ScalarField StaticProfile::sound_coefficient() const {
  ScalarField c(grid);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = p_prime[i] / rho0[i];
  return c;
}

StaticProfile build_profile(const PotentialSpec& spec, const ScalingParams& params, const Grid& g) {
  const double gamma = params.gamma;
  if (!(gamma > 1.0)) throw DomainError("build_profile: unsupported adiabatic exponent (gamma <= 1)");
  if (!(params.rho_bar > 0.0)) throw DomainError("build_profile: rho_bar must be positive");

  StaticProfile prof{g,
                     spec,
                     gamma,
                     params.rho_bar,
                     ScalarField(g),
                     ScalarField(g),
                     ScalarField(g),
                     VectorField(g, Staggering::cell),
                     VectorField(g, Staggering::cell)};

  auto fill = [&](std::size_t cell, double r, double x, double y, double z) {
    const ProfilePoint pt = profile_at(spec, r, gamma, params.rho_bar);
    prof.rho0[cell] = pt.rho;
    prof.potential_field[cell] = spec.value(r);
    prof.p_prime[cell] = pressure_prime(pt.rho, gamma);
    if (g.is_radial()) {
      prof.grad_rho0[0][cell] = pt.drho;
      prof.grad_potential[0][cell] = spec.d1(r);
    } else {
      const double inv = r > 0.0 ? 1.0 / r : 0.0;
      const double xs[3] = {x, y, z};
      for (int d = 0; d < 3; ++d) {
        prof.grad_rho0[d][cell] = pt.drho * xs[d] * inv;
        prof.grad_potential[d][cell] = spec.d1(r) * xs[d] * inv;
      }
    }
  };

  if (g.is_radial()) {
    for (std::size_t i = 0; i < g.size(); ++i) fill(i, g.center(i), g.center(i), 0.0, 0.0);
  } else {
    const int n = g.n();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double x = g.coord(i), y = g.coord(j), z = g.coord(k);
          fill(g.index(i, j, k), std::sqrt(x * x + y * y + z * z), x, y, z);
        }
  }
  return prof;
}

double static_residual(const StaticProfile& prof, const Grid& g) {
  require_aligned(prof.grid, g, "static_residual");
  if (!g.is_radial()) throw DomainError("static_residual: radial grids only");
  const std::size_t n = g.size();
  const double h = g.h();
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = std::pow(prof.rho0[i], prof.gamma);
  const auto& F = prof.potential_field;

  // Even reflection across r = 0; second-order one-sided stencil at the outer cell.
  auto ddr = [&](const auto& f, std::size_t i) {
    if (i == 0) return (f[1] - f[0]) / (2.0 * h);
    if (i + 1 == n) return (3.0 * f[i] - 4.0 * f[i - 1] + f[i - 2]) / (2.0 * h);
    return (f[i + 1] - f[i - 1]) / (2.0 * h);
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    worst = std::max(worst, std::abs(ddr(p, i) - prof.rho0[i] * ddr(F, i)));
  return worst;
}

FlatnessReport flatness_report(const PotentialSpec& spec, const ScalingParams& params,
                               const Grid& g) {
  const double gamma = params.gamma;
  if (!(gamma > 1.0)) throw DomainError("flatness_report: gamma must exceed 1");
  FlatnessReport rep{0.0, 0.0, 0.0, 0.0};
  // Radial functions only: Hessian of f(|x|) has eigenvalues f'' and f'/r (twice),
  // the Jacobian of b(|x|) x/|x| has eigenvalues b' and b/r (twice).
  auto frob = [](double d2, double d1, double r) {
    return std::sqrt(d2 * d2 + 2.0 * (d1 / r) * (d1 / r));
  };
  for (std::size_t c = 0; c < g.size(); ++c) {
    const double r = g.radius(c);
    if (r == 0.0) continue;
    const ProfilePoint pt = profile_at(spec, r, gamma, params.rho_bar);
    const double rho = pt.rho;
    const double a1 = gamma * (gamma - 1.0) * std::pow(rho, gamma - 2.0) * pt.drho;
    const double a2 = gamma * (gamma - 1.0) *
                      ((gamma - 2.0) * std::pow(rho, gamma - 3.0) * pt.drho * pt.drho +
                       std::pow(rho, gamma - 2.0) * pt.d2rho);
    // B = rho0 Q''(rho0) rho0' with Q''(r) = gamma (gamma - 2) r^(gamma - 3)
    const double kb = gamma * (gamma - 2.0);
    const double b = kb * std::pow(rho, gamma - 2.0) * pt.drho;
    const double b1 = kb * ((gamma - 2.0) * std::pow(rho, gamma - 3.0) * pt.drho * pt.drho +
                            std::pow(rho, gamma - 2.0) * pt.d2rho);
    const double r2 = r * r, r3 = r2 * r;
    rep.potential_gradient = std::max(rep.potential_gradient, r2 * std::abs(spec.d1(r)));
    rep.potential_hessian = std::max(rep.potential_hessian, r3 * frob(spec.d2(r), spec.d1(r), r));
    rep.coefficient_first = std::max(rep.coefficient_first, r2 * (std::abs(a1) + std::abs(b)));
    rep.coefficient_second =
        std::max(rep.coefficient_second, r3 * (frob(a2, a1, r) + frob(b1, b, r)));
  }
  return rep;
}

void write_profile_csv(std::ostream& os, const StaticProfile& prof) {
  if (!prof.grid.is_radial()) throw DomainError("profile CSV export needs a radial grid");
  os << "r,F,rho0,p_prime\n" << std::setprecision(17);
  for (std::size_t i = 0; i < prof.grid.size(); ++i)
    os << prof.grid.center(i) << ',' << prof.potential_field[i] << ',' << prof.rho0[i] << ','
       << prof.p_prime[i] << '\n';
}

void write_flatness(std::ostream& os, const FlatnessReport& rep) {
  os << std::setprecision(17) << "potential_gradient = " << rep.potential_gradient << '\n'
     << "potential_hessian = " << rep.potential_hessian << '\n'
     << "coefficient_first = " << rep.coefficient_first << '\n'
     << "coefficient_second = " << rep.coefficient_second << '\n';
}

}  // namespace lowmach
