#include "lowmach/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "lowmach/error.hpp"
#include "lowmach/profile.hpp"

namespace lowmach {

double integrate(const ScalarField& f, const Grid& g) {
  require_aligned(f.grid(), g, "integrate");
  double s = 0.0;
  if (g.is_radial()) {
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g.volume(i);
    return s;
  }
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i];
  return s * g.volume(0);
}

double integrate_ball(const ScalarField& f, const Grid& g, double radius) {
  require_aligned(f.grid(), g, "integrate_ball");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (g.radius(i) < radius) s += f[i] * g.volume(i);
  return s;
}

double lp_norm(const ScalarField& f, double p, const Grid& g, std::optional<double> ball_radius) {
  require_aligned(f.grid(), g, "lp_norm");
  if (!(p >= 1.0)) throw DomainError("lp_norm: exponent must satisfy p >= 1");
  const double rad = ball_radius.value_or(kInfinity);
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (g.radius(i) < rad) m = std::max(m, std::abs(f[i]));
    return m;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(g.radius(i) < rad)) continue;
    const double a = std::abs(f[i]);
    s += (p == 2.0 ? a * a : (p == 1.0 ? a : std::pow(a, p))) * g.volume(i);
  }
  return p == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / p);
}

double l2_norm(const VectorField& v, const Grid& g) {
  double s = 0.0;
  for (int d = 0; d < v.dim(); ++d) {
    const double n = lp_norm(v[d], 2.0, g);
    s += n * n;
  }
  return std::sqrt(s);
}

double integrate_product(const ScalarField& u, const ScalarField& v, const ScalarField& w) {
  require_aligned(u.grid(), v.grid(), "integrate_product");
  require_aligned(u.grid(), w.grid(), "integrate_product");
  const Grid& g = u.grid();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i] * w[i] * g.volume(i);
  return s;
}

double weighted_inner(const ScalarField& u, const ScalarField& v, const StaticProfile& prof) {
  return integrate_product(u, v, prof.acoustic_weight());
}

}  // namespace lowmach
